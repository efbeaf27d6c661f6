//! Mellin–Barnes integrands built from unit-slope gamma factors, their pole
//! chains, residue sums with logarithmic terms, and contour quadrature.

mod poles;
mod quad;
mod residue;

pub use poles::{enumerate_poles, Pole};
pub use quad::{contour_quadrature, QuadOptions};
pub use residue::{laurent_residue, residue_sum, ResidueSeries, ResidueTerm, DEFAULT_CHAIN, MAX_JET, RIGHT_X_MIN};

use std::fmt;

use crate::error::{Error, Result};
use crate::params::DerivedParams;

/// Γ(slope·s + offset) with slope ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub slope: i8,
    pub offset: f64,
}

impl GammaFactor {
    pub fn plus(offset: f64) -> Self {
        Self { slope: 1, offset }
    }

    pub fn minus(offset: f64) -> Self {
        Self { slope: -1, offset }
    }

    pub fn arg(&self, s: f64) -> f64 {
        self.slope as f64 * s + self.offset
    }

    /// Non-negative n with slope·s + offset = −n, if s is a pole of the factor.
    pub fn pole_index(&self, s: f64) -> Option<u64> {
        let z = self.arg(s);
        let n = (-z).round();
        (n >= 0.0 && (z + n).abs() < POLE_TOL).then_some(n as u64)
    }

    /// Pole chain seen from the contour: left for slope +1, right for slope −1.
    pub fn side(&self) -> Side {
        if self.slope > 0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// First pole of the chain: −offset (left) or offset (right).
    pub fn chain_start(&self) -> f64 {
        -self.slope as f64 * self.offset
    }
}

/// Locations closer than this are the same point.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// (s − root)^power; for negative powers `side` says which chain the pole joins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalFactor {
    pub root: f64,
    pub power: i32,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    None,
    PlusPi,
    MinusPi,
}

impl Rotation {
    pub fn theta(self) -> f64 {
        match self {
            Rotation::None => 0.0,
            Rotation::PlusPi => std::f64::consts::PI,
            Rotation::MinusPi => -std::f64::consts::PI,
        }
    }
}

/// scale · Π Γ(num) / Π Γ(den) · Π (s − r)^p · (x e^{iθ})^{−s}
#[derive(Debug, Clone, PartialEq)]
pub struct MbIntegrand {
    pub num: Vec<GammaFactor>,
    pub den: Vec<GammaFactor>,
    pub rational: Vec<RationalFactor>,
    pub rotation: Rotation,
    pub scale: f64,
}

impl MbIntegrand {
    pub fn new(num: Vec<GammaFactor>, den: Vec<GammaFactor>) -> Self {
        Self {
            num,
            den,
            rational: Vec::new(),
            rotation: Rotation::None,
            scale: 1.0,
        }
    }

    pub fn rotated(mut self, rotation: Rotation) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale *= scale;
        self
    }

    pub fn with_rational(mut self, root: f64, power: i32, side: Side) -> Self {
        self.rational.push(RationalFactor { root, power, side });
        self
    }

    /// Standard G^{m,n}_{p,q}(x | a; b) kernel:
    /// Π_{j≤m} Γ(b_j + s) Π_{j≤n} Γ(1 − a_j − s) / Π_{j>m} Γ(1 − b_j − s) Π_{j>n} Γ(a_j + s).
    pub fn meijer(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::InvalidParameter(format!(
                "G^{{{m},{n}}}_{{{},{}}} has inconsistent orders",
                a.len(),
                b.len()
            )));
        }
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (j, &bj) in b.iter().enumerate() {
            if j < m {
                num.push(GammaFactor::plus(bj));
            } else {
                den.push(GammaFactor::minus(1.0 - bj));
            }
        }
        for (j, &aj) in a.iter().enumerate() {
            if j < n {
                num.push(GammaFactor::minus(1.0 - aj));
            } else {
                den.push(GammaFactor::plus(aj));
            }
        }
        Ok(Self::new(num, den))
    }

    /// Exponential decay rates of |integrand| along Re s = σ for τ → +∞ and τ → −∞.
    pub fn decay_rates(&self) -> (f64, f64) {
        let base = (self.num.len() as f64 - self.den.len() as f64) * std::f64::consts::FRAC_PI_2;
        let th = self.rotation.theta();
        (base - th, base + th)
    }

    /// Algebraic exponent of |integrand| ~ |τ|^P on Re s = σ.
    pub fn algebraic_power(&self, sigma: f64) -> f64 {
        let p = |f: &GammaFactor| f.arg(sigma) - 0.5;
        self.num.iter().map(p).sum::<f64>() - self.den.iter().map(p).sum::<f64>()
            + self.rational.iter().map(|r| r.power as f64).sum::<f64>()
    }
}

impl fmt::Display for MbIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = |v: &[GammaFactor]| {
            v.iter()
                .map(|g| {
                    let s = if g.slope > 0 { "s" } else { "-s" };
                    format!("Γ({}{}{})", g.offset, if g.slope > 0 { "+" } else { "" }, s)
                })
                .collect::<Vec<_>>()
                .join("")
        };
        write!(f, "{}·{} / {}", self.scale, g(&self.num), g(&self.den))?;
        for r in &self.rational {
            write!(f, "·(s-{})^{}", r.root, r.power)?;
        }
        match self.rotation {
            Rotation::None => write!(f, "·x^-s"),
            Rotation::PlusPi => write!(f, "·(x e^iπ)^-s"),
            Rotation::MinusPi => write!(f, "·(x e^-iπ)^-s"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GKind {
    /// G^{1,2}_{2,4}(x | 1+a₁*, 1+a₂*; b…), finite-t family.
    G12,
    /// G^{4,1}_{2,4}(x | 1+a₁*, 1+a₂*; b…), near-∞ family.
    G41,
}

/// Integrand for `kind` with b* taken in the order `b_order` (a permutation of 0..4).
pub fn build_integrand(
    kind: GKind,
    dp: &DerivedParams,
    b_order: [usize; 4],
    rotation: Rotation,
) -> Result<MbIntegrand> {
    let mut seen = [false; 4];
    for &i in &b_order {
        if i >= 4 || seen[i] {
            return Err(Error::InvalidParameter(format!(
                "{b_order:?} is not a permutation of 0..4"
            )));
        }
        seen[i] = true;
    }
    let b = dp.b()?;
    let a = dp.a()?;
    let bs: Vec<f64> = b_order.iter().map(|&i| b[i]).collect();
    let av = [1.0 + a[0], 1.0 + a[1]];
    let m = match kind {
        GKind::G12 => 1,
        GKind::G41 => 4,
    };
    let n = match kind {
        GKind::G12 => 2,
        GKind::G41 => 1,
    };
    Ok(MbIntegrand::meijer(m, n, &av, &bs)?.rotated(rotation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_params, ModelParams, Rational};

    fn dp(en: i64, ed: i64, gn: i64, gd: i64) -> DerivedParams {
        let mp = ModelParams::with_background(Rational::new(en, ed), Rational::new(gn, gd), 0.5, 1.0).unwrap();
        derive_params(&mp, 0).unwrap()
    }

    fn offsets(v: &[GammaFactor], slope: i8) -> Vec<f64> {
        let mut o: Vec<f64> = v.iter().filter(|g| g.slope == slope).map(|g| g.offset).collect();
        o.sort_by(|a, b| a.partial_cmp(b).unwrap());
        o
    }

    #[test]
    fn finite_t_kernel_layout() {
        let d = dp(2, 3, 1, 1);
        let a = d.a().unwrap();
        let ib = build_integrand(GKind::G12, &d, [0, 1, 2, 3], Rotation::None).unwrap();
        assert!((offsets(&ib.num, 1)[0] - 0.25).abs() < 1e-15);
        let right = offsets(&ib.num, -1);
        assert!((right[0] + a[0]).abs() < 1e-15 && (right[1] + a[1]).abs() < 1e-15);
        let den = offsets(&ib.den, -1);
        for (x, y) in den.iter().zip([-0.25, 1.25, 2.25]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(ib.algebraic_power(-1.0), -3.0);
    }

    #[test]
    fn near_infinity_kernel_layout() {
        let d = dp(1, 2, 4, 3);
        let a = d.a().unwrap();
        let ib = build_integrand(GKind::G41, &d, [0, 1, 2, 3], Rotation::None).unwrap();
        let left = offsets(&ib.num, 1);
        let r6 = 6f64.sqrt();
        for (x, y) in left.iter().zip([-r6, 0.0, 0.0, r6]) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((offsets(&ib.num, -1)[0] + a[0]).abs() < 1e-15);
        assert_eq!(ib.den.len(), 1);
        assert!((ib.den[0].offset - (1.0 + a[1])).abs() < 1e-15);
        let rot = build_integrand(GKind::G41, &d, [0, 1, 2, 3], Rotation::PlusPi).unwrap();
        assert_eq!(rot.num, ib.num);
        assert_eq!(rot.rotation.theta(), std::f64::consts::PI);
    }

    #[test]
    fn rejects_bad_permutation() {
        assert!(build_integrand(GKind::G12, &dp(2, 3, 1, 1), [0, 0, 1, 2], Rotation::None).is_err());
        assert!(build_integrand(GKind::G12, &dp(2, 3, 4, 3), [0, 1, 2, 3], Rotation::None).is_err());
    }
}
