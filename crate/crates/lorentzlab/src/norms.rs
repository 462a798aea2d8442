//! Hyperbolic norms on `R^n`: concave, positively 1-homogeneous functionals
//! with values in `{−∞} ∪ [0, ∞)`, together with their Legendre duality,
//! polarization and signature diagnostics.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extended::{ExtReal, ExtendedTime};

/// Conjugate exponents `1/p + 1/q = 1` with `0 ≠ q < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityParams {
    pub q: f64,
    pub p: f64,
}

impl DualityParams {
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q.is_finite() && q != 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("exponent q must satisfy 0 ≠ q < 1, got {q}")));
        }
        Ok(DualityParams { q, p: q / (q - 1.0) })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(p.is_finite() && p != 0.0 && p < 1.0) {
            return Err(Error::Parameter(format!("exponent p must satisfy 0 ≠ p < 1, got {p}")));
        }
        Self::from_q(p / (p - 1.0))
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Minkowski {
        g: DMatrix<f64>,
        ginv: DMatrix<f64>,
        /// time orientation covector `g(e₀, ·)`
        orient: DVector<f64>,
        /// `g = diag(1, −1, …, −1)`, evaluated with the exact formula
        standard: bool,
    },
    Lp {
        p: f64,
    },
}

/// Which family a norm belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormFamily {
    Minkowski,
    Lp(f64),
}

#[derive(Clone, Debug)]
pub struct HyperbolicNorm {
    kind: Kind,
    dim: usize,
}

/// Eigenvalue-sign classification of a nondegenerate symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    PositiveDefinite,
    Lorentzian,
    Other,
}

impl HyperbolicNorm {
    /// The standard Minkowski norm on `R^{1,dim−1}`.
    pub fn minkowski(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter("Minkowski space needs dimension ≥ 2".into()));
        }
        let mut g = DMatrix::<f64>::zeros(dim, dim);
        g[(0, 0)] = 1.0;
        for i in 1..dim {
            g[(i, i)] = -1.0;
        }
        let mut orient = DVector::zeros(dim);
        orient[0] = 1.0;
        Ok(HyperbolicNorm { kind: Kind::Minkowski { ginv: g.clone(), g, orient, standard: true }, dim })
    }

    /// The norm `√g(v,v)` of a Lorentzian scalar product given row by row.
    ///
    /// Time orientation: the eigenvector of the positive eigenvalue, signed so
    /// that its largest-magnitude component is positive.
    pub fn from_metric(rows: &[Vec<f64>]) -> Result<Self> {
        let g = matrix_from_rows(rows)?;
        if signature_diagnostic(rows)? != Signature::Lorentzian {
            return Err(Error::Parameter("metric must have signature (+, −, …, −)".into()));
        }
        let dim = g.nrows();
        let eig = SymmetricEigen::new(g.clone());
        let k = (0..dim).find(|&i| eig.eigenvalues[i] > 0.0).expect("one positive eigenvalue");
        let mut e0: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let big = (0..dim).max_by(|&a, &b| e0[a].abs().total_cmp(&e0[b].abs())).unwrap();
        if e0[big] < 0.0 {
            e0 = -e0;
        }
        let orient = &g * &e0;
        let ginv = g.clone().try_inverse().ok_or_else(|| Error::Parameter("metric is singular".into()))?;
        let standard = is_standard(&g);
        Ok(HyperbolicNorm { kind: Kind::Minkowski { g, ginv, orient, standard }, dim })
    }

    /// Hyperbolic `ℓ^p` norm `(v₁^p − Σ|v_i|^p)^{1/p}` on `R^dim`.
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("ℓ^p norm needs p ≥ 1, got {p}")));
        }
        if dim < 2 {
            return Err(Error::Parameter("ℓ^p norm needs dimension ≥ 2".into()));
        }
        Ok(HyperbolicNorm { kind: Kind::Lp { p }, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> NormFamily {
        match self.kind {
            Kind::Minkowski { .. } => NormFamily::Minkowski,
            Kind::Lp { p } => NormFamily::Lp(p),
        }
    }

    /// The metric matrix for the Minkowski kind.
    pub fn metric(&self) -> Option<&DMatrix<f64>> {
        match &self.kind {
            Kind::Minkowski { g, .. } => Some(g),
            Kind::Lp { .. } => None,
        }
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!("vector has {} components, norm has dimension {}", v.len(), self.dim)));
        }
        Ok(())
    }

    /// `𝔫(v)`: nonnegative on the future cone, `−∞` elsewhere.
    pub fn eval(&self, v: &[f64]) -> Result<ExtendedTime> {
        self.check_dim(v)?;
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[f64]) -> ExtendedTime {
        if v.iter().all(|&x| x == 0.0) {
            return ExtendedTime::ZERO;
        }
        match &self.kind {
            Kind::Minkowski { g, orient, standard, .. } => {
                if *standard {
                    standard_minkowski(v)
                } else {
                    let dv = DVector::from_column_slice(v);
                    let qv = dv.dot(&(g * &dv));
                    if qv >= 0.0 && orient.dot(&dv) > 0.0 {
                        ExtendedTime::from_nonneg(qv.sqrt())
                    } else {
                        ExtendedTime::NEG_INF
                    }
                }
            }
            Kind::Lp { p } => lp_norm(*p, v),
        }
    }

    /// Lowers an index with the metric: `v ↦ g(v, ·)`.
    pub fn flat(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v)?;
        let g = self.require_metric("index lowering")?;
        Ok((g * DVector::from_column_slice(v)).iter().copied().collect())
    }

    /// Raises an index with the dual metric: `ζ ↦ g*(ζ, ·)`.
    pub fn sharp(&self, zeta: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(zeta)?;
        let ginv = self.require_dual("index raising")?;
        Ok((ginv * DVector::from_column_slice(zeta)).iter().copied().collect())
    }

    fn require_metric(&self, what: &str) -> Result<&DMatrix<f64>> {
        match &self.kind {
            Kind::Minkowski { g, .. } => Ok(g),
            Kind::Lp { p } => Err(Error::Unsupported(format!("{what} is only available for Minkowski norms (ℓ^{p} given)"))),
        }
    }

    fn require_dual(&self, what: &str) -> Result<&DMatrix<f64>> {
        match &self.kind {
            Kind::Minkowski { ginv, .. } => Ok(ginv),
            Kind::Lp { p } => Err(Error::Unsupported(format!("{what}: dual of the ℓ^{p} norm is not implemented"))),
        }
    }

    /// Dual norm `√g*(ζ,ζ)` of a future-directed causal covector, `−∞` otherwise.
    pub fn dual_eval(&self, zeta: &[f64]) -> Result<ExtendedTime> {
        self.check_dim(zeta)?;
        let ginv = self.require_dual("dual norm")?;
        if zeta.iter().all(|&x| x == 0.0) {
            return Ok(ExtendedTime::ZERO);
        }
        let z = DVector::from_column_slice(zeta);
        let raised = ginv * &z;
        let qz = z.dot(&raised);
        // ζ is future-directed iff its raised vector is
        let future = match &self.kind {
            Kind::Minkowski { orient, .. } => orient.dot(&raised) > 0.0,
            Kind::Lp { .. } => unreachable!(),
        };
        Ok(if qz >= 0.0 && future { ExtendedTime::from_nonneg(qz.sqrt()) } else { ExtendedTime::NEG_INF })
    }

    /// `L(v) = 𝔫(v)^q / q` on the future cone, `−∞` off it (`0^q = +∞` for `q < 0`).
    pub fn lagrangian(&self, params: DualityParams, v: &[f64]) -> Result<ExtReal> {
        self.require_metric("the Lagrangian")?;
        Ok(self.eval(v)?.pow_over_q(params.q))
    }

    /// `H(ζ) = ‖ζ‖_*^p / p` on the future dual cone, `−∞` off it.
    pub fn hamiltonian(&self, params: DualityParams, zeta: &[f64]) -> Result<ExtReal> {
        Ok(self.dual_eval(zeta)?.pow_over_q(params.p))
    }

    /// `ζ(v) − ‖v‖^q/q − ‖ζ‖_*^p/p`, nonnegative by the reverse Young inequality.
    pub fn fenchel_young_gap(&self, params: DualityParams, v: &[f64], zeta: &[f64]) -> Result<ExtReal> {
        let nv = self.eval(v)?;
        let nz = self.dual_eval(zeta)?;
        if !nv.is_causal() || !nz.is_causal() {
            return Err(Error::Domain("Fenchel–Young gap needs future-directed causal v and ζ".into()));
        }
        let pairing: f64 = v.iter().zip(zeta).map(|(a, b)| a * b).sum();
        Ok(ExtReal::Finite(pairing) - nv.pow_over_q(params.q) - nz.pow_over_q(params.p))
    }

    /// The Legendre partner `DL(v) = 𝔫(v)^{q−2} v♭` of a timelike vector.
    pub fn legendre_covector(&self, params: DualityParams, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.eval(v)?.finite_value().filter(|&n| n > 0.0).ok_or_else(|| Error::Domain("Legendre partner needs a future timelike vector".into()))?;
        let scale = n.powf(params.q - 2.0);
        Ok(self.flat(v)?.into_iter().map(|c| scale * c).collect())
    }

    fn future_norm(&self, x: &[f64], name: &str) -> Result<f64> {
        self.eval(x)?.finite_value().ok_or_else(|| Error::Domain(format!("{name} is not in the future cone")))
    }

    /// `½(‖x+y‖² − ‖x‖² − ‖y‖²)` for `x, y` in the future cone.
    pub fn polarize(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let nx = self.future_norm(x, "x")?;
        let ny = self.future_norm(y, "y")?;
        let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let ns = self.future_norm(&s, "x + y")?;
        Ok(0.5 * (ns * ns - nx * nx - ny * ny))
    }

    /// `‖x+2y‖² + ‖x‖² − 2‖x+y‖² − 2‖y‖²`; zero for positively polarizable norms.
    pub fn parallelogram_defect(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let nx = self.future_norm(x, "x")?;
        let ny = self.future_norm(y, "y")?;
        let s1: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let s2: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + 2.0 * b).collect();
        let n1 = self.future_norm(&s1, "x + y")?;
        let n2 = self.future_norm(&s2, "x + 2y")?;
        Ok(n2 * n2 + nx * nx - 2.0 * n1 * n1 - 2.0 * ny * ny)
    }

    /// A random future-directed timelike vector with time component in `[0.5, 3]`-ish.
    pub fn random_future_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let v = match &self.kind {
                Kind::Minkowski { standard: true, .. } | Kind::Lp { .. } => {
                    let p = match self.kind {
                        Kind::Lp { p } => p,
                        _ => 2.0,
                    };
                    let mut v: Vec<f64> = (0..self.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let spatial: f64 = v[1..].iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p);
                    v[0] = spatial + rng.random_range(0.05..2.0);
                    v
                }
                Kind::Minkowski { ginv, orient, .. } => {
                    let e0: DVector<f64> = ginv * orient;
                    let mut v: Vec<f64> = (0..self.dim).map(|i| e0[i] * rng.random_range(0.5..3.0)).collect();
                    for c in v.iter_mut() {
                        *c += rng.random_range(-0.3..0.3);
                    }
                    v
                }
            };
            if self.eval_unchecked(&v).is_chronological() {
                return v;
            }
        }
    }

    /// Seeded search for the future pair with the largest `|parallelogram defect|`.
    pub fn search_parallelogram_defect(&self, samples: usize, seed: u64) -> (f64, Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = (0.0, vec![0.0; self.dim], vec![0.0; self.dim]);
        for _ in 0..samples {
            let x = self.random_future_vector(&mut rng);
            let y = self.random_future_vector(&mut rng);
            if let Ok(d) = self.parallelogram_defect(&x, &y) {
                if d.abs() > best.0 {
                    best = (d.abs(), x, y);
                }
            }
        }
        best
    }
}

fn standard_minkowski(v: &[f64]) -> ExtendedTime {
    let t = v[0];
    let q = t * t - v[1..].iter().map(|x| x * x).sum::<f64>();
    if t > 0.0 && q >= 0.0 {
        ExtendedTime::from_nonneg(q.sqrt())
    } else {
        ExtendedTime::NEG_INF
    }
}

fn lp_norm(p: f64, v: &[f64]) -> ExtendedTime {
    if p == 2.0 {
        return standard_minkowski(v);
    }
    let t = v[0];
    if t < 0.0 {
        return ExtendedTime::NEG_INF;
    }
    let a = t.powf(p);
    let s: f64 = v[1..].iter().map(|x| x.abs().powf(p)).sum();
    if a >= s {
        ExtendedTime::from_nonneg((a - s).powf(1.0 / p))
    } else {
        ExtendedTime::NEG_INF
    }
}

fn is_standard(g: &DMatrix<f64>) -> bool {
    let n = g.nrows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i != j {
                0.0
            } else if i == 0 {
                1.0
            } else {
                -1.0
            };
            g[(i, j)] == want
        })
    })
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("metric must be a nonempty square matrix".into()));
    }
    let g = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    for i in 0..n {
        for j in 0..i {
            let scale = 1.0 + g[(i, j)].abs().max(g[(j, i)].abs());
            if (g[(i, j)] - g[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Parameter(format!("metric is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(g)
}

/// Classifies a symmetric nondegenerate form by the signs of its eigenvalues.
pub fn signature_diagnostic(rows: &[Vec<f64>]) -> Result<Signature> {
    let g = matrix_from_rows(rows)?;
    let eig = SymmetricEigen::new(g);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    if eig.eigenvalues.iter().any(|l| l.abs() <= 1e-12 * scale) {
        return Err(Error::Parameter("form is degenerate".into()));
    }
    let pos = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
    let n = eig.eigenvalues.len();
    Ok(if pos == n {
        Signature::PositiveDefinite
    } else if pos == 1 {
        Signature::Lorentzian
    } else {
        Signature::Other
    })
}

/// Outcome of sampling the (reverse) triangle inequality on the positive cone
/// `{g(v,v) > 0}` of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleSample {
    pub samples: usize,
    pub triangle_violations: usize,
    pub reverse_violations: usize,
}

impl TriangleSample {
    /// Verdict implied by the sampled inequalities: the reverse inequality
    /// indicates Lorentzian signature, the ordinary one positive definiteness.
    pub fn implied(&self) -> Signature {
        match (self.triangle_violations == 0, self.reverse_violations == 0) {
            (true, false) => Signature::PositiveDefinite,
            (false, true) => Signature::Lorentzian,
            _ => Signature::Other,
        }
    }
}

/// Samples pairs `v, w = v + δ` in the positive cone (with `δ` small, so
/// `v + w` stays in the cone) and counts violations of both inequalities.
pub fn sample_triangle_inequalities(rows: &[Vec<f64>], samples: usize, seed: u64) -> Result<TriangleSample> {
    let g = matrix_from_rows(rows)?;
    let n = g.nrows();
    let quad = |v: &DVector<f64>| v.dot(&(&g * v));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TriangleSample { samples: 0, triangle_violations: 0, reverse_violations: 0 };
    let rel = 1e-12;
    while out.samples < samples {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let qv = quad(&v);
        if qv <= 1e-3 {
            continue;
        }
        let r = 0.3 * qv.sqrt() / (1.0 + v.norm());
        let w = &v + DVector::from_fn(n, |_, _| rng.random_range(-r..r));
        let s = &v + &w;
        let (qw, qs) = (quad(&w), quad(&s));
        if qw <= 0.0 || qs <= 0.0 {
            continue;
        }
        out.samples += 1;
        let (a, b, c) = (qv.sqrt(), qw.sqrt(), qs.sqrt());
        if c > (a + b) * (1.0 + rel) {
            out.triangle_violations += 1;
        }
        if c < (a + b) * (1.0 - rel) {
            out.reverse_violations += 1;
        }
    }
    Ok(out)
}
