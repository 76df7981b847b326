//! Extended-precision complex arithmetic, branch-aware powers, Γ and the
//! Bessel/Hankel functions of real order.

mod complex;
mod special;

pub use complex::{pi, BigComplex};
pub use special::{
    bessel_j, bessel_j_lifted, hankel_h, hankel_h_lifted, hankel_pair_lifted, HankelKind,
    HankelPair, Lifted, SERIES_CAP,
};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_TOLERANCE: f64 = 1e-40;

/// Working precision and the default acceptance tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionContext {
    pub mantissa_bits: u32,
    pub default_tolerance: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            mantissa_bits: DEFAULT_BITS,
            default_tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl PrecisionContext {
    /// Requires `bits >= 64` and `0 < tol <= 2^{-bits/2}`.
    pub fn new(mantissa_bits: u32, default_tolerance: f64) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(Error::InvalidPrecision(format!(
                "mantissa_bits = {mantissa_bits} < 64"
            )));
        }
        let bound = 2f64.powf(-(mantissa_bits as f64) / 2.0);
        if !(default_tolerance > 0.0 && default_tolerance <= bound) {
            return Err(Error::InvalidPrecision(format!(
                "tolerance {default_tolerance:e} not in (0, 2^-{}]",
                mantissa_bits / 2
            )));
        }
        Ok(PrecisionContext {
            mantissa_bits,
            default_tolerance,
        })
    }

    /// Context with the given bits and the loosest tolerance they support
    /// (capped at the default tolerance).
    pub fn with_bits(mantissa_bits: u32) -> Result<Self> {
        let bound = 2f64.powf(-(mantissa_bits as f64) / 2.0);
        Self::new(mantissa_bits, bound.min(DEFAULT_TOLERANCE))
    }

    pub fn bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn real(&self, x: f64) -> Float {
        Float::with_val(self.mantissa_bits, x)
    }

    /// Exact-as-possible `p/q` at working precision.
    pub fn ratio(&self, p: i64, q: i64) -> Float {
        Float::with_val(self.mantissa_bits, p) / q
    }

    /// Parses a decimal literal or a `p/q` fraction at working precision.
    pub fn parse_real(&self, s: &str) -> Result<Float> {
        let s = s.trim();
        let parse = |t: &str| -> Result<Float> {
            Float::parse(t.trim())
                .map(|v| Float::with_val(self.mantissa_bits, v))
                .map_err(|e| Error::InvalidOption(format!("cannot parse '{t}': {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q.is_zero() {
                    return Err(Error::InvalidOption(format!("zero denominator in '{s}'")));
                }
                Ok(parse(p)? / q)
            }
            None => parse(s),
        }
    }

    pub fn complex(&self, re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(self.mantissa_bits, re, im)
    }

    pub fn pi(&self) -> Float {
        pi(self.mantissa_bits)
    }

    pub fn constants(&self) -> MathConstants {
        MathConstants {
            euler_gamma: Float::with_val(self.mantissa_bits, Constant::Euler),
            pi: self.pi(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MathConstants {
    pub euler_gamma: Float,
    pub pi: Float,
}

/// The two cut rays used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchSpec {
    /// Cut along `[0, -i inf)`, `arg` in `(-pi/2, 3pi/2]`.
    CutNegImag,
    /// Cut along `[0, +i inf)`, `arg` in `(-3pi/2, pi/2]`.
    CutPosImag,
}

impl BranchSpec {
    /// Argument of `z` in this branch's range.
    pub fn arg(self, z: &BigComplex) -> Float {
        let p = z.prec();
        let mut t = z.arg();
        let half_pi = Float::with_val(p, pi(p) / 2u32);
        match self {
            BranchSpec::CutNegImag => {
                if t <= -half_pi.clone() {
                    t += Float::with_val(p, pi(p) * 2u32);
                }
            }
            BranchSpec::CutPosImag => {
                if t > half_pi {
                    t -= Float::with_val(p, pi(p) * 2u32);
                }
            }
        }
        t
    }

    /// Whether `z` lies exactly on the cut ray (origin included).
    pub fn on_cut(self, z: &BigComplex) -> bool {
        z.re.is_zero()
            && match self {
                BranchSpec::CutNegImag => !z.im.is_sign_positive() || z.im.is_zero(),
                BranchSpec::CutPosImag => !z.im.is_sign_negative() || z.im.is_zero(),
            }
    }

    /// `log z = ln|z| + i arg z` on this branch.
    pub fn log(self, z: &BigComplex) -> Result<BigComplex> {
        if z.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(BigComplex {
            re: z.abs().ln(),
            im: self.arg(z),
        })
    }
}

/// `Γ(x)` for real `x`; poles at non-positive integers are errors.
pub fn gamma_real(x: &Float) -> Result<Float> {
    if x.is_integer() && *x <= 0 {
        return Err(Error::GammaPole(x.to_f64() as i64));
    }
    Ok(x.clone().gamma())
}

/// `z^p = exp(p (ln|z| + i arg z))` with `arg z` in `spec`'s range.
pub fn branch_power(z: &BigComplex, p: &Float, spec: BranchSpec) -> Result<BigComplex> {
    let l = spec.log(z)?;
    Ok(l.scale(p).exp())
}

/// `z^p` on the lifted argument `arg` (any real), `|z| = r > 0`.
pub fn lifted_power(r: &Float, arg: &Float, p: &Float) -> BigComplex {
    let prec = r.prec().max(arg.prec());
    let modulus = Float::with_val(prec, r.ln_ref()) * p;
    BigComplex::polar(&modulus.exp(), &Float::with_val(prec, arg * p))
}
