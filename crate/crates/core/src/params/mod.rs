//! Physical inputs, the derived index sets and their pole classification.

mod surd;
mod tables;

pub use surd::{parse_rational, ratio_to_f64, QuadNum, Rational, Surd};
pub use tables::{emit_tables, Table21Row, Table22Row, Tables, CATALOGUE};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Tolerance for deciding that an uncatalogued parameter difference is an integer.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub eta: Rational,
    pub gammas: Vec<Rational>,
    pub omegas: Vec<f64>,
    pub ks: Vec<f64>,
}

impl ModelParams {
    pub fn new(eta: Rational, gammas: Vec<Rational>, omegas: Vec<f64>, ks: Vec<f64>) -> Result<Self> {
        let m = gammas.len();
        if m == 0 || omegas.len() != m || ks.len() != m {
            return Err(Error::InvalidParameter(format!(
                "component lists must be non-empty and of equal length (gammas {m}, omegas {}, ks {})",
                omegas.len(),
                ks.len()
            )));
        }
        if let Some(w) = omegas.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density fraction {w} is not a finite non-negative number"
            )));
        }
        let total: f64 = omegas.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "density fractions sum to {total}, expected 1"
            )));
        }
        if let Some(k) = ks.iter().find(|k| !k.is_finite() || **k < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wave constant {k} must be finite and non-negative"
            )));
        }
        Ok(Self {
            eta,
            gammas,
            omegas,
            ks,
        })
    }

    /// Component 1 with (γ₁, Ω₁, k₁) embedded in a pressureless background
    /// carrying the remaining density fraction 1 − Ω₁.
    pub fn with_background(eta: Rational, gamma1: Rational, omega1: f64, k1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega1) {
            return Err(Error::InvalidParameter(format!("omega1 = {omega1} must lie in [0, 1]")));
        }
        if omega1 == 1.0 {
            return Self::new(eta, vec![gamma1], vec![1.0], vec![k1]);
        }
        Self::new(
            eta,
            vec![gamma1, Rational::one()],
            vec![omega1, 1.0 - omega1],
            vec![k1, 0.0],
        )
    }

    pub fn m(&self) -> usize {
        self.gammas.len()
    }

    /// Human-readable notes for inputs outside the catalogued regime.
    pub fn flags(&self) -> Vec<String> {
        let mut out = Vec::new();
        let half = Rational::new(1, 2);
        let two_thirds = Rational::new(2, 3);
        if self.eta != half && self.eta != two_thirds {
            out.push(format!("uncatalogued: eta = {} is neither 1/2 nor 2/3", self.eta));
        }
        for (i, g) in self.gammas.iter().enumerate() {
            if self.ks[i] > 0.0 && (*g < two_thirds || *g > Rational::from_integer(2)) {
                out.push(format!("uncatalogued: gamma_{} = {g} outside [2/3, 2]", i + 1));
            }
        }
        out
    }

    /// True when every component other than `idx` has k = 0, so the reduced
    /// single-component fourth-order equation applies to component `idx`.
    pub fn reduces_to(&self, idx: usize) -> bool {
        self.ks.iter().enumerate().all(|(j, k)| j == idx || *k == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AStar {
    Real([f64; 2]),
    /// −1 ± i·im
    Complex {
        re: f64,
        im: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub component: usize,
    pub eta: Rational,
    pub gamma: Rational,
    pub omega1: f64,
    pub k1: f64,
    pub alpha_i: Rational,
    pub alpha: Rational,
    /// `None` when α₁ = 0.
    pub b_star: Option<[f64; 4]>,
    pub a_star: Option<AStar>,
    /// Exact b* whenever α₁ ≠ 0 (inputs are rational).
    pub b_exact: Option<[Surd; 4]>,
    pub catalogued: bool,
    pub flags: Vec<String>,
}

impl DerivedParams {
    pub fn alpha1(&self) -> f64 {
        ratio_to_f64(self.alpha_i)
    }

    pub fn alpha_f64(&self) -> f64 {
        ratio_to_f64(self.alpha)
    }

    /// (2η − 1)²/4
    pub fn a_sq(&self) -> f64 {
        let a = self.alpha_f64();
        a * a
    }

    pub fn b(&self) -> Result<[f64; 4]> {
        self.b_star.ok_or_else(|| alpha1_zero("b*"))
    }

    pub fn a(&self) -> Result<[f64; 2]> {
        match self.a_star {
            Some(AStar::Real(a)) => Ok(a),
            Some(AStar::Complex { re, im }) => Err(Error::ComplexIndices(format!(
                "a* = {re} ± {im}i; no catalogued real-index solution exists"
            ))),
            None => Err(alpha1_zero("a*")),
        }
    }

    pub fn x_of_t(&self, t: f64) -> Result<f64> {
        let a1 = self.alpha1();
        if a1 == 0.0 {
            return Err(alpha1_zero("x(t)"));
        }
        Ok(self.k1 * self.k1 * t.powf(a1) / (a1 * a1))
    }

    pub fn t_of_x(&self, x: f64) -> Result<f64> {
        let a1 = self.alpha1();
        if a1 == 0.0 || self.k1 == 0.0 {
            return Err(alpha1_zero("t(x)"));
        }
        Ok((x * a1 * a1 / (self.k1 * self.k1)).powf(1.0 / a1))
    }
}

fn alpha1_zero(what: &str) -> Error {
    Error::Regime {
        op: "derived parameters",
        regime: "ALPHA1_ZERO".into(),
        hint: format!("{what} is undefined when alpha_1 = 0; use the quartic power-law roots"),
    }
}

pub fn alpha_i_exact(eta: Rational, gamma: Rational) -> Rational {
    Rational::from_integer(2) * (Rational::from_integer(2) - eta - gamma)
}

pub fn alpha_exact(eta: Rational) -> Rational {
    -(Rational::from_integer(2) * eta - Rational::one()) / Rational::from_integer(2)
}

/// Exact (b*₁, b*₂, b*₃, b*₄) or `None` when α₁ = 0.
pub fn b_star_exact(eta: Rational, gamma: Rational) -> Option<[Surd; 4]> {
    let a1 = alpha_i_exact(eta, gamma);
    if a1.is_zero() {
        return None;
    }
    let al = alpha_exact(eta);
    let a1sq = a1 * a1;
    let b1 = Surd::sqrt_of(al * al / a1sq)?;
    let b3 = Surd::sqrt_of((al * al + Rational::new(2, 3)) / a1sq)?;
    Some([b1, b1.neg(), b3, b3.neg()])
}

pub fn derive_params(mp: &ModelParams, component_index: usize) -> Result<DerivedParams> {
    if component_index >= mp.m() {
        return Err(Error::InvalidParameter(format!(
            "component index {component_index} out of range for {} components",
            mp.m()
        )));
    }
    let eta = mp.eta;
    let gamma = mp.gammas[component_index];
    let omega1 = mp.omegas[component_index];
    let k1 = mp.ks[component_index];
    let alpha_i = alpha_i_exact(eta, gamma);
    let alpha = alpha_exact(eta);
    let catalogued = CATALOGUE
        .iter()
        .any(|&(en, ed, gn, gd)| eta == Rational::new(en, ed) && gamma == Rational::new(gn, gd));
    let mut flags = mp.flags();

    let (b_star, a_star) = if alpha_i.is_zero() {
        (None, None)
    } else {
        let a1 = ratio_to_f64(alpha_i);
        let e = 2.0 * ratio_to_f64(eta) - 1.0;
        let a1sq = a1 * a1;
        // exact surds round once, the radical formula twice
        let (b1, b3) = match b_star_exact(eta, gamma) {
            Some(b) => (b[0].to_f64(), b[2].to_f64()),
            None => ((e * e / (4.0 * a1sq)).sqrt(), ((e * e / 4.0 + 2.0 / 3.0) / a1sq).sqrt()),
        };
        let rad = (e * e / 4.0 + 2.0 / 3.0 - 2.0 / 3.0 * omega1) / a1sq;
        let a = if rad >= 0.0 {
            AStar::Real([-1.0 + rad.sqrt(), -1.0 - rad.sqrt()])
        } else {
            flags.push(format!("complex indicial pair: a* = -1 ± {}i", (-rad).sqrt()));
            AStar::Complex {
                re: -1.0,
                im: (-rad).sqrt(),
            }
        };
        (Some([b1, -b1, b3, -b3]), Some(a))
    };
    Ok(DerivedParams {
        component: component_index,
        eta,
        gamma,
        omega1,
        k1,
        alpha_i,
        alpha,
        b_star,
        a_star,
        b_exact: b_star_exact(eta, gamma),
        catalogued,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Alpha1Zero,
    Generic,
    IntegerDiff,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Alpha1Zero => "ALPHA1_ZERO",
            Regime::Generic => "GENERIC",
            Regime::IntegerDiff => "INTEGER_DIFF",
        }
    }
}

/// Index pairs (i, j), 0-based, in table order 12, 13, 14, 23, 24, 34.
pub const DIFF_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    /// b*_i − b*_j in `DIFF_PAIRS` order; empty when α₁ = 0.
    pub pairwise_diffs: Vec<f64>,
    /// 1-based pairs whose difference is an integer (including zero).
    pub integer_pairs: Vec<(usize, usize)>,
    pub max_order: usize,
    pub regime: Regime,
    /// Whether integrality was decided symbolically.
    pub exact: bool,
    /// Classes of b* indices (0-based) whose mutual differences are integers,
    /// each sorted by decreasing b*.
    pub classes: Vec<Vec<usize>>,
}

pub fn classify_poles(dp: &DerivedParams) -> PoleReport {
    let Some(b) = dp.b_star else {
        return PoleReport {
            pairwise_diffs: Vec::new(),
            integer_pairs: Vec::new(),
            max_order: 0,
            regime: Regime::Alpha1Zero,
            exact: dp.catalogued,
            classes: Vec::new(),
        };
    };
    let exact = dp.catalogued && dp.b_exact.is_some();
    let diffs: Vec<f64> = DIFF_PAIRS.iter().map(|&(i, j)| b[i] - b[j]).collect();
    let is_int: Vec<bool> = DIFF_PAIRS
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| match (exact, dp.b_exact) {
            (true, Some(be)) => QuadNum::sub(be[i], be[j]).integer_value().is_some(),
            _ => (diffs[k] - diffs[k].round()).abs() < INTEGER_TOL,
        })
        .collect();
    let integer_pairs: Vec<(usize, usize)> = DIFF_PAIRS
        .iter()
        .zip(&is_int)
        .filter(|(_, &f)| f)
        .map(|(&(i, j), _)| (i + 1, j + 1))
        .collect();

    // union-find over the four indices
    let mut parent = [0usize, 1, 2, 3];
    fn find(p: &mut [usize; 4], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for &(i, j) in &integer_pairs {
        let (ri, rj) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..4 {
        let r = find(&mut parent, i);
        match classes.iter_mut().find(|c| find(&mut parent.clone(), c[0]) == r) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    for c in &mut classes {
        c.sort_by(|&i, &j| b[j].partial_cmp(&b[i]).unwrap().then(i.cmp(&j)));
    }
    // chains −b − ν of one class all overlap far enough out
    let max_order = classes.iter().map(Vec::len).max().unwrap_or(1);
    let regime = if integer_pairs.is_empty() {
        Regime::Generic
    } else {
        Regime::IntegerDiff
    };
    PoleReport {
        pairwise_diffs: diffs,
        integer_pairs,
        max_order,
        regime,
        exact,
        classes,
    }
}
