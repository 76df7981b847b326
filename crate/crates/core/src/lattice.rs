//! The discrete power map `Z^a` on `{0..N}²`: axis constraint, cross-ratio
//! fill and residual diagnostics.

use rug::Float;

use crate::error::{Error, Result, Site};
use crate::numerics::{BigComplex, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisKind {
    Horizontal,
    Vertical,
}

/// Lattice values `f(n, m) = Z^a(n, m)` for `0 <= n, m <= N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerMapGrid {
    pub a: Float,
    pub size: usize,
    values: Vec<BigComplex>,
    pub residual_cr: f64,
    pub residual_constraint: f64,
}

/// Relative size below which a denominator counts as zero.
fn negligible(x: &BigComplex, scale: &Float) -> bool {
    let bits = x.prec() as i32;
    match (x.mag_exp(), scale.get_exp()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(e), Some(s)) => e < s - bits + 16,
    }
}

/// Solves the axis constraint `a f = 2k (x - f)(f - p)/(x - p)` for `x`.
pub fn axis_step(
    f_prev: &BigComplex,
    f_cur: &BigComplex,
    k: usize,
    a: &Float,
    _axis: AxisKind,
) -> Result<BigComplex> {
    let d = (f_cur - f_prev).scale_f64(2.0 * k as f64);
    let af = f_cur.scale(a);
    let den = &af - &d;
    let scale = Float::with_val(a.prec(), af.abs() + d.abs());
    if negligible(&den, &scale) {
        return Err(Error::DegenerateDenominator(None));
    }
    let num = &f_prev.scale(a) - &d;
    Ok(&(f_cur * &num) / &den)
}

/// `(p - q)(x - s) / ((q - x)(s - p))`.
pub fn cross_ratio(p: &BigComplex, q: &BigComplex, x: &BigComplex, s: &BigComplex) -> BigComplex {
    &((p - q) * (x - s)) / &((q - x) * (s - p))
}

/// The fourth vertex `x` of a quadrilateral `(p, q, x, s)` with cross-ratio −1.
pub fn cross_ratio_fill(p: &BigComplex, q: &BigComplex, s: &BigComplex) -> Result<BigComplex> {
    let scale = Float::with_val(p.prec(), p.abs() + q.abs()) + s.abs();
    if negligible(&(p - q), &scale) || negligible(&(p - s), &scale) || negligible(&(q - s), &scale)
    {
        return Err(Error::CoincidentVertex(None));
    }
    let den = &(&p.scale_f64(2.0) - q) - s;
    if negligible(&den, &scale) {
        return Err(Error::DegenerateDenominator(None));
    }
    let num = &(&(p * s) + &(q * p)) - &(q * s).scale_f64(2.0);
    let x = &num / &den;
    let res = (&cross_ratio(p, q, &x, s) + &BigComplex::one(p.prec())).abs();
    let bound = Float::with_val(53, Float::u_exp(1, -(p.prec() as i32) / 2));
    if !(res <= bound) {
        return Err(Error::DegenerateDenominator(None));
    }
    Ok(x)
}

fn with_site(e: Error, site: Site) -> Error {
    match e {
        Error::DegenerateDenominator(_) => Error::DegenerateDenominator(Some(site)),
        Error::CoincidentVertex(_) => Error::CoincidentVertex(Some(site)),
        other => other,
    }
}

/// Extra working bits for an `N`-grid. Rounding errors obey the linearised
/// cross-ratio equation (a discrete Cauchy-Riemann system) whose Goursat
/// solutions weigh axis data binomially, so about 2.5 bits are lost per
/// diagonal step. For small `a` all values cluster within `O(a)` of 1 and
/// each fill cancels another `log2(1/a)` bits.
pub fn evolution_guard_bits(size: usize, a: &Float) -> u32 {
    let small_a = (-a.to_f64().log2()).max(0.0).ceil() as u32;
    3 * size as u32 + 64 + small_a
}

/// Evolves the grid: both axes by `axis_step`, then anti-diagonals by
/// `cross_ratio_fill`. Runs at `ctx.bits() + evolution_guard_bits(N, a)` and
/// rounds the result to `ctx.bits()`.
pub fn evolve_grid(a: &Float, size: usize, ctx: &PrecisionContext) -> Result<PowerMapGrid> {
    if !(*a > 0 && *a < 2) {
        return Err(Error::OutOfRange(format!("a = {} not in (0, 2)", a.to_f64())));
    }
    if size < 2 {
        return Err(Error::OutOfRange(format!("N = {size} < 2")));
    }
    let out_bits = ctx.bits();
    let bits = out_bits + evolution_guard_bits(size, a);
    let a = Float::with_val(bits, Float::with_val(out_bits, a));
    let pi = crate::numerics::pi(bits);
    let w = size + 1;
    let mut v = vec![BigComplex::zero(bits); w * w];
    let idx = |n: usize, m: usize| n * w + m;

    v[idx(1, 0)] = BigComplex::one(bits);
    v[idx(0, 1)] = BigComplex::cis(&(Float::with_val(bits, &a * &pi) / 2u32));
    for k in 1..size {
        let next = axis_step(&v[idx(k - 1, 0)], &v[idx(k, 0)], k, &a, AxisKind::Horizontal)
            .map_err(|e| with_site(e, (k + 1, 0)))?;
        v[idx(k + 1, 0)] = next;
        let next = axis_step(&v[idx(0, k - 1)], &v[idx(0, k)], k, &a, AxisKind::Vertical)
            .map_err(|e| with_site(e, (0, k + 1)))?;
        v[idx(0, k + 1)] = next;
    }
    for s in 2..=2 * size {
        for n in s.saturating_sub(size).max(1)..=(s - 1).min(size) {
            let m = s - n;
            let x = cross_ratio_fill(
                &v[idx(n - 1, m - 1)],
                &v[idx(n, m - 1)],
                &v[idx(n - 1, m)],
            )
            .map_err(|e| with_site(e, (n, m)))?;
            v[idx(n, m)] = x;
        }
    }
    let v = v.iter().map(|z| z.with_prec(out_bits)).collect();
    PowerMapGrid::from_values(Float::with_val(out_bits, a), size, v)
}

impl PowerMapGrid {
    /// Wraps row-major values (`index = n (N+1) + m`) and computes residuals.
    pub fn from_values(a: Float, size: usize, values: Vec<BigComplex>) -> Result<Self> {
        if values.len() != (size + 1) * (size + 1) {
            return Err(Error::Format(format!(
                "expected {} values, got {}",
                (size + 1) * (size + 1),
                values.len()
            )));
        }
        let mut g = PowerMapGrid {
            a,
            size,
            values,
            residual_cr: 0.0,
            residual_constraint: 0.0,
        };
        g.recompute_residuals();
        Ok(g)
    }

    pub fn prec(&self) -> u32 {
        self.a.prec()
    }

    pub fn get(&self, n: usize, m: usize) -> &BigComplex {
        &self.values[n * (self.size + 1) + m]
    }

    pub fn try_get(&self, n: usize, m: usize) -> Result<&BigComplex> {
        if n > self.size || m > self.size {
            return Err(Error::SiteOutOfGrid((n, m)));
        }
        Ok(self.get(n, m))
    }

    /// Overwrites one value; residuals are recomputed.
    pub fn set(&mut self, n: usize, m: usize, z: BigComplex) {
        let w = self.size + 1;
        self.values[n * w + m] = z;
        self.recompute_residuals();
    }

    pub fn values(&self) -> &[BigComplex] {
        &self.values
    }

    pub fn recompute_residuals(&mut self) {
        self.residual_cr = self.cross_ratio_worst().map_or(0.0, |(r, _)| r);
        self.residual_constraint = self.constraint_worst().map_or(0.0, |(r, _)| r);
    }

    /// `|cr + 1|` of the quadrilateral with lower-left corner `(n, m)`.
    pub fn cross_ratio_residual(&self, n: usize, m: usize) -> f64 {
        let cr = cross_ratio(
            self.get(n, m),
            self.get(n + 1, m),
            self.get(n + 1, m + 1),
            self.get(n, m + 1),
        );
        (&cr + &BigComplex::one(self.prec())).abs().to_f64()
    }

    /// `|LHS - RHS|` of the constraint at an interior point.
    pub fn constraint_residual(&self, n: usize, m: usize) -> f64 {
        let f = self.get(n, m);
        let term = |next: &BigComplex, prev: &BigComplex, k: usize| {
            let num = &(next - f) * &(f - prev);
            (&num / &(next - prev)).scale_f64(2.0 * k as f64)
        };
        let rhs = &term(self.get(n + 1, m), self.get(n - 1, m), n)
            + &term(self.get(n, m + 1), self.get(n, m - 1), m);
        (&f.scale(&self.a) - &rhs).abs().to_f64()
    }

    /// Largest cross-ratio residual and its cell; non-finite values win.
    pub fn cross_ratio_worst(&self) -> Option<(f64, Site)> {
        worst((0..self.size).flat_map(|n| (0..self.size).map(move |m| (n, m))), |n, m| {
            self.cross_ratio_residual(n, m)
        })
    }

    pub fn constraint_worst(&self) -> Option<(f64, Site)> {
        worst(
            (1..self.size).flat_map(|n| (1..self.size).map(move |m| (n, m))),
            |n, m| self.constraint_residual(n, m),
        )
    }
}

fn worst(sites: impl Iterator<Item = Site>, f: impl Fn(usize, usize) -> f64) -> Option<(f64, Site)> {
    let mut best: Option<(f64, Site)> = None;
    for (n, m) in sites {
        let r = f(n, m);
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if best.map_or(true, |(b, _)| r > b) {
            best = Some((r, (n, m)));
        }
    }
    best
}
