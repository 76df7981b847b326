//! The orthogonal circle pattern of a grid: circles centred at even sites,
//! intersection points at odd sites, one kite per lattice cell.

use std::fmt::Write as _;

use rug::Float;

use crate::error::{Error, Result, Site};
use crate::lattice::PowerMapGrid;
use crate::numerics::BigComplex;

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub site: Site,
    pub center: BigComplex,
    /// Mean distance to the neighbours that exist.
    pub radius: Float,
    /// `(max - min)/mean` over those distances.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Kite {
    /// Lower-left corner of the cell.
    pub site: Site,
    /// `f(n,m), f(n+1,m), f(n+1,m+1), f(n,m+1)`.
    pub vertices: [BigComplex; 4],
}

impl Kite {
    /// Twice the signed area (shoelace); positive iff counter-clockwise.
    pub fn signed_area2(&self) -> Float {
        let p = self.vertices[0].prec();
        let mut acc = Float::new(p);
        for k in 0..4 {
            let (u, v) = (&self.vertices[k], &self.vertices[(k + 1) % 4]);
            acc += Float::with_val(p, &u.re * &v.im) - Float::with_val(p, &u.im * &v.re);
        }
        acc
    }

    pub fn is_positive(&self) -> bool {
        self.signed_area2() > 0
    }

    fn edges(&self) -> impl Iterator<Item = (&BigComplex, &BigComplex)> {
        (0..4).map(move |k| (&self.vertices[k], &self.vertices[(k + 1) % 4]))
    }

    /// Strictly inside, for a convex counter-clockwise kite.
    fn contains_strictly(&self, z: &BigComplex) -> bool {
        self.edges().all(|(u, v)| orient(u, v, z) > 0)
    }

    fn bbox(&self) -> [f64; 4] {
        bbox_of(self.vertices.iter().map(|z| z.to_f64_pair()))
    }
}

/// Sign of `(q - p) × (r - p)`, zero when within a few ulps of
/// `|q - p| |r - p|` so that points rounded onto a shared edge stay on it.
fn orient(p: &BigComplex, q: &BigComplex, r: &BigComplex) -> i32 {
    let (u, v) = (q - p, r - p);
    let prec = p.prec();
    let c = Float::with_val(prec, &u.re * &v.im) - Float::with_val(prec, &u.im * &v.re);
    let scale = Float::with_val(prec, u.abs() * v.abs()) >> (prec as i32 - 16);
    if c.clone().abs() <= scale {
        0
    } else if c > 0 {
        1
    } else {
        -1
    }
}

/// Segments cross at a single interior point of both.
fn crosses(a: &BigComplex, b: &BigComplex, c: &BigComplex, d: &BigComplex) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0 && o3 * o4 < 0
}

fn bbox_of(points: impl Iterator<Item = (f64, f64)>) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for (x, y) in points {
        b[0] = b[0].min(x);
        b[1] = b[1].min(y);
        b[2] = b[2].max(x);
        b[3] = b[3].max(y);
    }
    b
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternDoc {
    pub a: Float,
    pub size: usize,
    pub circles: Vec<Circle>,
    pub points: Vec<(Site, BigComplex)>,
    pub kites: Vec<Kite>,
    /// `[xmin, ymin, xmax, ymax]` of all discs.
    pub bbox: [f64; 4],
    pub max_spread: f64,
    /// Largest `|d² - r₁² - r₂²|/(r₁² + r₂²)` over diagonal circle pairs.
    pub max_orthogonality: f64,
}

impl PatternDoc {
    pub fn circle(&self, n: usize, m: usize) -> Option<&Circle> {
        find_circle(&self.circles, (n, m))
    }

    pub fn negative_kites(&self) -> Vec<Site> {
        self.kites.iter().filter(|k| !k.is_positive()).map(|k| k.site).collect()
    }
}

/// Circles are stored sorted by site.
fn find_circle(circles: &[Circle], site: Site) -> Option<&Circle> {
    circles.binary_search_by(|c| c.site.cmp(&site)).ok().map(|k| &circles[k])
}

/// Builds the pattern and checks radius spread and orthogonality against
/// `tol`, reporting the first offending site.
pub fn extract_pattern(grid: &PowerMapGrid, tol: f64) -> Result<PatternDoc> {
    let size = grid.size;
    let p = grid.prec();
    let mut circles = Vec::new();
    let mut points = Vec::new();
    let mut max_spread = 0.0f64;
    for n in 0..=size {
        for m in 0..=size {
            let z = grid.get(n, m);
            if (n + m) % 2 != 0 {
                points.push(((n, m), z.clone()));
                continue;
            }
            let mut d: Vec<Float> = Vec::with_capacity(4);
            let nb = [
                (n.checked_sub(1), Some(m)),
                (Some(n + 1), Some(m)),
                (Some(n), m.checked_sub(1)),
                (Some(n), Some(m + 1)),
            ];
            for (i, j) in nb {
                if let (Some(i), Some(j)) = (i, j) {
                    if i <= size && j <= size {
                        d.push((grid.get(i, j) - z).abs());
                    }
                }
            }
            let mut sum = Float::new(p);
            for x in &d {
                sum += x;
            }
            let radius = sum / d.len() as u32;
            let (lo, hi) = d.iter().fold((d[0].clone(), d[0].clone()), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
            let spread = (Float::with_val(p, &hi - &lo) / &radius).to_f64();
            let spread = if spread.is_nan() { f64::INFINITY } else { spread };
            if spread > tol {
                return Err(Error::RadiusSpread { site: (n, m), spread });
            }
            max_spread = max_spread.max(spread);
            circles.push(Circle {
                site: (n, m),
                center: z.clone(),
                radius,
                spread,
            });
        }
    }
    let index = |n: usize, m: usize| find_circle(&circles, (n, m));
    let mut max_orthogonality = 0.0f64;
    for c in &circles {
        let (n, m) = c.site;
        let mut others = vec![(n + 1, m + 1)];
        if m >= 1 {
            others.push((n + 1, m - 1));
        }
        for (i, j) in others {
            let Some(o) = index(i, j) else { continue };
            let d2 = (&o.center - &c.center).norm_sqr();
            let r2 = Float::with_val(p, c.radius.square_ref()) + o.radius.clone().square();
            let res = ((d2 - &r2).abs() / r2).to_f64();
            let res = if res.is_nan() { f64::INFINITY } else { res };
            if res > tol {
                return Err(Error::Orthogonality {
                    site: (n, m),
                    other: (i, j),
                    residual: res,
                });
            }
            max_orthogonality = max_orthogonality.max(res);
        }
    }
    let mut kites = Vec::with_capacity(size * size);
    for n in 0..size {
        for m in 0..size {
            kites.push(Kite {
                site: (n, m),
                vertices: [
                    grid.get(n, m).clone(),
                    grid.get(n + 1, m).clone(),
                    grid.get(n + 1, m + 1).clone(),
                    grid.get(n, m + 1).clone(),
                ],
            });
        }
    }
    let bbox = bbox_of(circles.iter().flat_map(|c| {
        let (x, y) = c.center.to_f64_pair();
        let r = c.radius.to_f64();
        [(x - r, y - r), (x + r, y + r)]
    }));
    Ok(PatternDoc {
        a: grid.a.clone(),
        size,
        circles,
        points,
        kites,
        bbox,
        max_spread,
        max_orthogonality,
    })
}

/// Pairs of kites with lower-left corner in `{0..window-1}²` whose interiors
/// intersect: a proper edge crossing, or a vertex, edge midpoint or centroid
/// of one strictly inside the other. Kites must be positively oriented.
pub fn kite_overlaps(doc: &PatternDoc, window: usize) -> Vec<(Site, Site)> {
    let ks: Vec<&Kite> = doc
        .kites
        .iter()
        .filter(|k| k.site.0 < window && k.site.1 < window)
        .collect();
    let boxes: Vec<[f64; 4]> = ks.iter().map(|k| k.bbox()).collect();
    let probes: Vec<Vec<BigComplex>> = ks.iter().map(|k| probe_points(k)).collect();
    let mut out = Vec::new();
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let (b, c) = (&boxes[i], &boxes[j]);
            let slack = 1e-9 * (1.0 + b[2].abs().max(c[2].abs()));
            if b[2] + slack < c[0] || c[2] + slack < b[0] || b[3] + slack < c[1] || c[3] + slack < b[1] {
                continue;
            }
            if interiors_meet(ks[i], &probes[i], ks[j], &probes[j]) {
                out.push((ks[i].site, ks[j].site));
            }
        }
    }
    out
}

fn probe_points(k: &Kite) -> Vec<BigComplex> {
    let mut v: Vec<BigComplex> = k.vertices.to_vec();
    for (u, w) in k.edges() {
        v.push((u + w).scale_f64(0.5));
    }
    let s = k.vertices.iter().skip(1).fold(k.vertices[0].clone(), |acc, z| &acc + z);
    v.push(s.scale_f64(0.25));
    v
}

fn interiors_meet(x: &Kite, px: &[BigComplex], y: &Kite, py: &[BigComplex]) -> bool {
    for (a, b) in x.edges() {
        for (c, d) in y.edges() {
            if crosses(a, b, c, d) {
                return true;
            }
        }
    }
    px.iter().any(|z| y.contains_strictly(z)) || py.iter().any(|z| x.contains_strictly(z))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    /// Multiplier applied to all coordinates; must be positive and finite.
    pub scale: f64,
    pub stroke_width: f64,
    pub draw_kites: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 100.0,
            stroke_width: 0.5,
            draw_kites: true,
        }
    }
}

/// Fixed 15-significant-digit decimal without exponent or trailing zeros.
fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// SVG 1.1 document: one `<circle>` per circle and, optionally, one closed
/// `<polyline>` per kite. Mathematical `y` points up.
pub fn render_svg(doc: &PatternDoc, opts: &SvgOptions) -> Result<Vec<u8>> {
    if !(opts.scale > 0.0 && opts.scale.is_finite()) {
        return Err(Error::InvalidOption(format!("scale = {}", opts.scale)));
    }
    if !(opts.stroke_width >= 0.0 && opts.stroke_width.is_finite()) {
        return Err(Error::InvalidOption(format!("stroke width = {}", opts.stroke_width)));
    }
    if doc.circles.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let s = opts.scale;
    let [x0, y0, x1, y1] = doc.bbox.map(|v| v * s);
    let pad_x = 0.05 * (x1 - x0).max(f64::MIN_POSITIVE);
    let pad_y = 0.05 * (y1 - y0).max(f64::MIN_POSITIVE);
    let (vx, vw) = (x0 - pad_x, x1 - x0 + 2.0 * pad_x);
    // after the y flip the top edge sits at -y1
    let (vy, vh) = (-(y1 + pad_y), y1 - y0 + 2.0 * pad_y);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    let _ = writeln!(
        out,
        "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">",
        num(opts.stroke_width)
    );
    for c in &doc.circles {
        let (x, y) = c.center.to_f64_pair();
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            num(x * s),
            num(y * s),
            num(c.radius.to_f64() * s)
        );
    }
    if opts.draw_kites {
        for k in &doc.kites {
            let mut pts: Vec<String> = k
                .vertices
                .iter()
                .map(|z| {
                    let (x, y) = z.to_f64_pair();
                    format!("{},{}", num(x * s), num(y * s))
                })
                .collect();
            pts.push(pts[0].clone());
            let _ = writeln!(out, "<polyline stroke=\"gray\" points=\"{}\"/>", pts.join(" "));
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out.into_bytes())
}
