/// Real polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn derivative(&self) -> Self {
        Self(self.0.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut v = vec![0.0];
        v.extend(self.0.iter().enumerate().map(|(i, &c)| c / (i + 1) as f64));
        Self(v)
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self((0..n).map(|i| self.0.get(i).unwrap_or(&0.0) + o.0.get(i).unwrap_or(&0.0)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    /// ∫₀¹ g = 1, weight G(t) = 1 − (1/t)Σ g(n/t)
    G,
    /// ∫₀¹ h = 0, weight H(t) = 1 − Σ h(n/t)
    H,
}

/// A polynomial density on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub name: String,
    pub kind: DensityKind,
    pub poly: Polynomial,
}

impl Density {
    pub fn eval(&self, y: f64) -> f64 {
        self.poly.eval(y)
    }

    /// ∫₀^a density.
    pub fn integral_to(&self, a: f64) -> f64 {
        self.poly.antiderivative().eval(a)
    }

    /// ∫_a^1 density(y)/y dy for 0 < a ≤ 1.
    pub fn integral_over_y(&self, a: f64) -> f64 {
        let c = &self.poly.0;
        let c0 = c.first().copied().unwrap_or(0.0);
        let rest = Polynomial(c.iter().skip(1).copied().collect());
        rest.integral(a, 1.0) - c0 * a.ln()
    }
}

/// g₁(y) = 4y(1 − y²).
pub fn g1() -> Density {
    Density { name: "g1".into(), kind: DensityKind::G, poly: Polynomial(vec![0.0, 4.0, 0.0, -4.0]) }
}

/// h₁(y) = (2/3)(1 − y²)(8y − 3).
pub fn h1() -> Density {
    Density { name: "h1".into(), kind: DensityKind::H, poly: Polynomial(vec![-2.0, 16.0 / 3.0, 2.0, -16.0 / 3.0]) }
}
