use num_complex::Complex64;

/// Biquadratic d⁴ − B d² + C = 0 governing the power-law exponents of Φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticRoots {
    /// d₁, d₂ = ±√(x²₊), d₃, d₄ = ±√(x²₋)
    pub roots: [Complex64; 4],
    pub b: f64,
    pub c: f64,
    /// max |p(d)| / max(1, |B|, |C|)
    pub residual: f64,
}

impl QuarticRoots {
    pub fn poly(&self, d: Complex64) -> Complex64 {
        let d2 = d * d;
        d2 * d2 - d2 * self.b + self.c
    }

    /// Exponents of δ = t^α Φ.
    pub fn delta_exponents(&self, alpha: f64) -> [Complex64; 4] {
        self.roots.map(|d| d + alpha)
    }
}

/// Roots of the power-law indicial equation, solved as a quadratic in d².
pub fn quartic_roots(eta: f64, omega1: f64, k1: f64) -> QuarticRoots {
    let e2 = (2.0 * eta - 1.0).powi(2);
    let k2 = k1 * k1;
    let b = e2 / 2.0 + 2.0 / 3.0 - k2;
    let c = e2 * e2 / 16.0 + 2.0 * e2 / 12.0 + (2.0 / 3.0 * omega1 - e2 / 4.0 - 2.0 / 3.0) * k2;
    let disc = Complex64::new(b * b / 4.0 - c, 0.0).sqrt();
    let xp = disc + b / 2.0;
    let xm = -disc + b / 2.0;
    let (dp, dm) = (xp.sqrt(), xm.sqrt());
    let mut q = QuarticRoots {
        roots: [dp, -dp, dm, -dm],
        b,
        c,
        residual: 0.0,
    };
    let scale = 1f64.max(b.abs()).max(c.abs());
    q.residual = q.roots.iter().map(|&d| q.poly(d).norm()).fold(0.0, f64::max) / scale;
    q
}
