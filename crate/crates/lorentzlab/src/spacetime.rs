//! Discrete metric measure spacetimes: a finite point set with a time
//! separation `ℓ`, reference weights `𝔪`, optional coordinates, axiom
//! validation and causal-order queries.

use crate::error::{check_index, Error, Result};
use crate::extended::{ExtReal, ExtendedTime};
use crate::norms::{HyperbolicNorm, NormFamily};

/// Regular lattice of cell centres; point `i` sits at the centre of cell `i`.
///
/// Axis 0 is time. Points are enumerated in row-major order with the last
/// axis varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    /// Lower corner of the box.
    pub lower: Vec<f64>,
    pub spacing: Vec<f64>,
    /// Cells per axis.
    pub shape: Vec<usize>,
}

impl Grid {
    pub fn new(extent: &[(f64, f64)], resolution: &[usize]) -> Result<Self> {
        if extent.len() != resolution.len() || extent.is_empty() {
            return Err(Error::Dimension("extent and resolution must list the same number of axes".into()));
        }
        if let Some(r) = resolution.iter().find(|&&r| r < 2) {
            return Err(Error::Parameter(format!("resolution must be at least 2 cells per axis, got {r}")));
        }
        if let Some((a, b)) = extent.iter().find(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::Parameter(format!("empty or unbounded axis [{a}, {b}]")));
        }
        Ok(Grid {
            lower: extent.iter().map(|e| e.0).collect(),
            spacing: extent.iter().zip(resolution).map(|(e, &r)| (e.1 - e.0) / r as f64).collect(),
            shape: resolution.to_vec(),
        })
    }

    /// Box and resolution whose cell centres run from `first` to `last` in steps `h`.
    pub fn lattice(first: &[f64], last: &[f64], h: f64) -> Result<(Vec<(f64, f64)>, Vec<usize>)> {
        if first.len() != last.len() {
            return Err(Error::Dimension("lattice corners differ in dimension".into()));
        }
        let mut extent = Vec::new();
        let mut res = Vec::new();
        for (&a, &b) in first.iter().zip(last) {
            let cells = ((b - a) / h).round() as usize + 1;
            extent.push((a - 0.5 * h, a - 0.5 * h + cells as f64 * h));
            res.push(cells);
        }
        Ok((extent, res))
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = i % self.shape[k];
            i /= self.shape[k];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &s)| acc * s + i)
    }

    pub fn centre(&self, i: usize) -> Vec<f64> {
        self.multi_index(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| self.lower[k] + (j as f64 + 0.5) * self.spacing[k])
            .collect()
    }

    /// Lattice point whose cell contains `x`, if `x` lies in the box.
    pub fn nearest(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut idx = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let s = (x[k] - self.lower[k]) / self.spacing[k];
            if !(s >= 0.0 && s <= self.shape[k] as f64) {
                return None;
            }
            idx.push((s.floor() as usize).min(self.shape[k] - 1));
        }
        Some(self.flat_index(&idx))
    }

    /// Lattice displacement `y − x` computed from integer offsets (exact on null rays).
    fn displacement(&self, i: usize, j: usize, out: &mut [f64]) {
        let (mut a, mut b) = (i, j);
        for k in (0..self.dim()).rev() {
            let s = self.shape[k];
            let di = (b % s) as f64 - (a % s) as f64;
            out[k] = di * self.spacing[k];
            a /= s;
            b /= s;
        }
    }
}

/// Generators of sampled continuum model spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorFamily {
    Minkowski,
    HyperbolicLp(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub extent: Vec<(f64, f64)>,
    pub resolution: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Separation {
    Explicit(Vec<ExtendedTime>),
    /// `ℓ(x, y) = 𝔫(y − x)`, evaluated lazily from coordinates.
    Norm(HyperbolicNorm),
}

/// Finite point set with time separation, reference measure and optional embedding.
#[derive(Clone, Debug)]
pub struct DiscreteSpacetime {
    n: usize,
    sep: Separation,
    weights: Vec<f64>,
    dim: usize,
    coords: Option<Vec<f64>>,
    labels: Option<Vec<String>>,
    grid: Option<Grid>,
    generator: Option<GeneratorSpec>,
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::Parameter(format!("weight of point {i} must be finite and nonnegative, got {w}")));
    }
    Ok(())
}

impl DiscreteSpacetime {
    /// Explicit time-separation matrix (`ell[i][j] = ℓ(i, j)`) and weights.
    pub fn from_matrix(ell: Vec<Vec<ExtendedTime>>, weights: Vec<f64>) -> Result<Self> {
        let n = ell.len();
        if n == 0 {
            return Err(Error::Dimension("spacetime needs at least one point".into()));
        }
        if let Some((i, r)) = ell.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!("row {i} of ℓ has {} entries, expected {n}", r.len())));
        }
        if weights.len() != n {
            return Err(Error::Dimension(format!("{} weights for {n} points", weights.len())));
        }
        check_weights(&weights)?;
        Ok(DiscreteSpacetime {
            n,
            sep: Separation::Explicit(ell.into_iter().flatten().collect()),
            weights,
            dim: 0,
            coords: None,
            labels: None,
            grid: None,
            generator: None,
        })
    }

    /// Points in `R^d` with `ℓ(x, y) = 𝔫(y − x)`.
    pub fn from_norm(norm: HyperbolicNorm, coords: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let n = coords.len();
        if n == 0 || weights.len() != n {
            return Err(Error::Dimension(format!("{} weights for {n} points", weights.len())));
        }
        let d = norm.dim();
        if let Some(c) = coords.iter().find(|c| c.len() != d) {
            return Err(Error::Dimension(format!("coordinate of length {} in dimension {d}", c.len())));
        }
        check_weights(&weights)?;
        Ok(DiscreteSpacetime {
            n,
            sep: Separation::Norm(norm),
            weights,
            dim: d,
            coords: Some(coords.into_iter().flatten().collect()),
            labels: None,
            grid: None,
            generator: None,
        })
    }

    /// The normed model space itself, represented by its origin; used where only
    /// `ℓ` between coordinate positions is needed.
    pub fn model_space(norm: HyperbolicNorm) -> Self {
        let d = norm.dim();
        DiscreteSpacetime {
            n: 1,
            sep: Separation::Norm(norm),
            weights: vec![0.0],
            dim: d,
            coords: Some(vec![0.0; d]),
            labels: None,
            grid: None,
            generator: None,
        }
    }

    /// Attaches embedding coordinates to an explicit spacetime.
    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::Dimension(format!("{} coordinates for {} points", coords.len(), self.n)));
        }
        let d = coords.first().map_or(0, |c| c.len());
        if coords.iter().any(|c| c.len() != d) || (self.dim != 0 && d != self.dim) {
            return Err(Error::Dimension("coordinates have inconsistent dimension".into()));
        }
        self.dim = d;
        self.coords = Some(coords.into_iter().flatten().collect());
        Ok(self)
    }

    /// Replaces the reference-measure weights.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::Dimension(format!("{} weights for {} points", weights.len(), self.n)));
        }
        check_weights(&weights)?;
        self.weights = weights;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!("{} labels for {} points", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn norm_grid(norm: HyperbolicNorm, family: GeneratorFamily, extent: &[(f64, f64)], resolution: &[usize]) -> Result<Self> {
        let grid = Grid::new(extent, resolution)?;
        if grid.dim() != norm.dim() {
            return Err(Error::Dimension(format!("grid has {} axes, norm dimension {}", grid.dim(), norm.dim())));
        }
        let n = grid.len();
        let coords: Vec<f64> = (0..n).flat_map(|i| grid.centre(i)).collect();
        Ok(DiscreteSpacetime {
            n,
            sep: Separation::Norm(norm),
            weights: vec![grid.cell_volume(); n],
            dim: grid.dim(),
            coords: Some(coords),
            labels: None,
            generator: Some(GeneratorSpec { family, extent: extent.to_vec(), resolution: resolution.to_vec() }),
            grid: Some(grid),
        })
    }

    /// Minkowski space `R^{1,dim−1}` sampled at cell centres of a box.
    pub fn minkowski_grid(dim: usize, extent: &[(f64, f64)], resolution: &[usize]) -> Result<Self> {
        Self::norm_grid(HyperbolicNorm::minkowski(dim)?, GeneratorFamily::Minkowski, extent, resolution)
    }

    /// Hyperbolic `ℓ^p`-space sampled at cell centres of a box.
    pub fn hyperbolic_lp_grid(p: f64, dim: usize, extent: &[(f64, f64)], resolution: &[usize]) -> Result<Self> {
        Self::norm_grid(HyperbolicNorm::lp(p, dim)?, GeneratorFamily::HyperbolicLp(p), extent, resolution)
    }

    /// Rebuilds a generated spacetime from its stanza.
    pub fn from_generator(spec: &GeneratorSpec) -> Result<Self> {
        let dim = spec.extent.len();
        match spec.family {
            GeneratorFamily::Minkowski => Self::minkowski_grid(dim, &spec.extent, &spec.resolution),
            GeneratorFamily::HyperbolicLp(p) => Self::hyperbolic_lp_grid(p, dim, &spec.extent, &spec.resolution),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    pub fn generator(&self) -> Option<&GeneratorSpec> {
        self.generator.as_ref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The norm inducing `ℓ`, for spacetimes sampled from a normed space.
    pub fn norm(&self) -> Option<&HyperbolicNorm> {
        match &self.sep {
            Separation::Norm(n) => Some(n),
            Separation::Explicit(_) => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.sep, Separation::Explicit(_))
    }

    pub fn has_coords(&self) -> bool {
        self.coords.is_some()
    }

    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        self.coords.as_ref().map(|c| &c[i * self.dim..(i + 1) * self.dim])
    }

    pub fn check_point(&self, i: usize) -> Result<()> {
        check_index(i, self.n)
    }

    /// `ℓ(i, j)`.
    pub fn ell(&self, i: usize, j: usize) -> ExtendedTime {
        match &self.sep {
            Separation::Explicit(m) => m[i * self.n + j],
            Separation::Norm(norm) => {
                let mut v = [0.0f64; 8];
                let d = self.dim;
                if d <= 8 {
                    self.displacement(i, j, &mut v[..d]);
                    norm.eval_unchecked(&v[..d])
                } else {
                    let mut w = vec![0.0; d];
                    self.displacement(i, j, &mut w);
                    norm.eval_unchecked(&w)
                }
            }
        }
    }

    fn displacement(&self, i: usize, j: usize, out: &mut [f64]) {
        if let Some(g) = &self.grid {
            g.displacement(i, j, out);
        } else {
            let c = self.coords.as_ref().expect("norm-induced spacetimes carry coordinates");
            let d = self.dim;
            for k in 0..d {
                out[k] = c[j * d + k] - c[i * d + k];
            }
        }
    }

    /// Separation from point `i` to an arbitrary coordinate position.
    pub fn ell_to_position(&self, i: usize, y: &[f64]) -> Result<ExtendedTime> {
        let norm = self.norm().ok_or_else(|| Error::Unsupported("positions off the point set need a norm-induced spacetime".into()))?;
        let x = self.coords(i).ok_or_else(|| Error::Unsupported("spacetime has no coordinates".into()))?;
        let v: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        norm.eval(&v)
    }

    /// Separation from an arbitrary coordinate position to point `j`.
    pub fn ell_from_position(&self, x: &[f64], j: usize) -> Result<ExtendedTime> {
        let norm = self.norm().ok_or_else(|| Error::Unsupported("positions off the point set need a norm-induced spacetime".into()))?;
        let y = self.coords(j).ok_or_else(|| Error::Unsupported("spacetime has no coordinates".into()))?;
        let v: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        norm.eval(&v)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.ell(i, j).is_causal()
    }

    pub fn ll(&self, i: usize, j: usize) -> bool {
        self.ell(i, j).is_chronological()
    }

    /// Row-major copy of the full matrix.
    pub fn ell_matrix(&self) -> Vec<ExtendedTime> {
        match &self.sep {
            Separation::Explicit(m) => m.clone(),
            Separation::Norm(_) => (0..self.n * self.n).map(|k| self.ell(k / self.n, k % self.n)).collect(),
        }
    }

    /// Same spacetime with the separation stored explicitly.
    pub fn materialize(&self) -> Self {
        let mut out = self.clone();
        out.sep = Separation::Explicit(self.ell_matrix());
        out
    }

    /// Sub-spacetime on the given points (in the given order).
    pub fn restrict(&self, points: &[usize]) -> Result<Self> {
        for &p in points {
            self.check_point(p)?;
        }
        let ell = points.iter().map(|&i| points.iter().map(|&j| self.ell(i, j)).collect()).collect();
        let mut out = Self::from_matrix(ell, points.iter().map(|&i| self.weights[i]).collect())?;
        if self.coords.is_some() {
            out = out.with_coords(points.iter().map(|&i| self.coords(i).unwrap().to_vec()).collect())?;
        }
        if let Some(l) = &self.labels {
            out.labels = Some(points.iter().map(|&i| l[i].clone()).collect());
        }
        Ok(out)
    }

    /// Checks the rough-spacetime axioms exhaustively with absolute tolerance `tol`.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.n;
        let m = self.ell_matrix();
        let at = |i: usize, j: usize| m[i * n + j].value();
        let slack = ExtReal::Finite(tol);
        let mut report = ValidationReport { tol, ..Default::default() };
        for x in 0..n {
            if !m[x * n + x].is_causal() {
                report.diagonal.push(x);
            }
            for y in 0..n {
                let lxy = at(x, y);
                if lxy == ExtReal::NegInf {
                    continue;
                }
                if x < y && at(y, x) != ExtReal::NegInf {
                    report.antisymmetry.push((x, y));
                }
                for z in 0..n {
                    let lyz = at(y, z);
                    if lyz == ExtReal::NegInf {
                        continue;
                    }
                    let rhs = (at(x, z) - lyz) + slack;
                    if lxy > rhs {
                        report.reverse_triangle_count += 1;
                        if report.reverse_triangle.len() < ValidationReport::MAX_WITNESSES {
                            report.reverse_triangle.push((x, y, z));
                        }
                    }
                }
            }
        }
        report
    }

    /// The causal and chronological relations as boolean matrices.
    pub fn relations(&self) -> CausalRelations {
        let n = self.n;
        let m = self.ell_matrix();
        CausalRelations {
            n,
            leq: m.iter().map(|v| v.is_causal()).collect(),
            ll: m.iter().map(|v| v.is_chronological()).collect(),
        }
    }

    /// `I^±(x)` or `J^±(x)`.
    pub fn future_past(&self, x: usize, kind: ConeKind) -> Result<Vec<usize>> {
        self.check_point(x)?;
        Ok((0..self.n)
            .filter(|&y| match kind {
                ConeKind::ChronologicalFuture => self.ll(x, y),
                ConeKind::ChronologicalPast => self.ll(y, x),
                ConeKind::CausalFuture => self.leq(x, y),
                ConeKind::CausalPast => self.leq(y, x),
            })
            .collect())
    }

    /// Causal emerald `J(X, Y) = J⁺(X) ∩ J⁻(Y)`.
    pub fn emerald(&self, xs: &[usize], ys: &[usize]) -> Result<Vec<usize>> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Precondition("emerald needs nonempty point sets".into()));
        }
        for &p in xs.iter().chain(ys) {
            self.check_point(p)?;
        }
        Ok((0..self.n).filter(|&z| xs.iter().any(|&x| self.leq(x, z)) && ys.iter().any(|&y| self.leq(z, y))).collect())
    }

    /// Chronological emerald `I(X, Y) = I⁺(X) ∩ I⁻(Y)`.
    pub fn chronological_emerald(&self, xs: &[usize], ys: &[usize]) -> Result<Vec<usize>> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Precondition("emerald needs nonempty point sets".into()));
        }
        Ok((0..self.n).filter(|&z| xs.iter().any(|&x| self.ll(x, z)) && ys.iter().any(|&y| self.ll(z, y))).collect())
    }

    pub fn family(&self) -> Option<NormFamily> {
        self.norm().map(|n| n.family())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    ChronologicalFuture,
    ChronologicalPast,
    CausalFuture,
    CausalPast,
}

/// Violations of the rough-spacetime axioms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    /// Triples `(x, y, z)` with `ℓ(x,y) > ℓ(x,z) − ℓ(y,z) + tol` (first witnesses).
    pub reverse_triangle: Vec<(usize, usize, usize)>,
    pub reverse_triangle_count: usize,
    /// Points with `ℓ(x,x) = −∞`.
    pub diagonal: Vec<usize>,
    /// Pairs `x < y` related both ways.
    pub antisymmetry: Vec<(usize, usize)>,
    pub tol: f64,
}

impl ValidationReport {
    pub const MAX_WITNESSES: usize = 10_000;

    pub fn is_valid(&self) -> bool {
        self.reverse_triangle_count == 0 && self.diagonal.is_empty() && self.antisymmetry.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.reverse_triangle_count + self.diagonal.len() + self.antisymmetry.len()
    }
}

/// `≤` and `≪` as dense boolean matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CausalRelations {
    pub n: usize,
    pub leq: Vec<bool>,
    pub ll: Vec<bool>,
}

impl CausalRelations {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn ll(&self, i: usize, j: usize) -> bool {
        self.ll[i * self.n + j]
    }

    /// First triple breaking transitivity of `≤` or `≪`, if any.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (self.leq(x, y), self.ll(x, y));
                if !a {
                    continue;
                }
                for z in 0..n {
                    if self.leq(y, z) && !self.leq(x, z) {
                        return Some((x, y, z));
                    }
                    if b && self.ll(y, z) && !self.ll(x, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// First triple breaking push-up (`x ≪ y ≤ z` or `x ≤ y ≪ z` without `x ≪ z`).
    pub fn push_up_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if !self.leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    let chained = (self.ll(x, y) && self.leq(y, z)) || (self.ll(y, z));
                    if self.leq(y, z) && chained && !self.ll(x, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.leq(i, i))
    }

    pub fn chronology_within_causality(&self) -> bool {
        self.ll.iter().zip(&self.leq).all(|(&a, &b)| !a || b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: f64) -> ExtendedTime {
        ExtendedTime::finite(x).unwrap()
    }
    const NI: ExtendedTime = ExtendedTime::NEG_INF;

    #[test]
    fn two_point_chain_is_valid() {
        let s = DiscreteSpacetime::from_matrix(vec![vec![t(0.0), t(1.0)], vec![NI, t(0.0)]], vec![1.0, 1.0]).unwrap();
        assert!(s.validate(0.0).is_valid());
        let r = s.relations();
        assert!(r.ll(0, 1) && !r.leq(1, 0));
    }

    #[test]
    fn short_diagonal_is_a_reverse_triangle_violation() {
        let ell = vec![vec![t(0.0), t(1.0), t(1.5)], vec![NI, t(0.0), t(1.0)], vec![NI, NI, t(0.0)]];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap();
        let rep = s.validate(0.0);
        assert!(!rep.is_valid());
        assert!(rep.reverse_triangle.contains(&(0, 1, 2)));
    }

    #[test]
    fn antisymmetry_and_diagonal_are_reported() {
        let ell = vec![vec![NI, t(0.0)], vec![t(0.0), t(0.0)]];
        let rep = DiscreteSpacetime::from_matrix(ell, vec![1.0; 2]).unwrap().validate(1e-9);
        assert_eq!(rep.diagonal, vec![0]);
        assert_eq!(rep.antisymmetry, vec![(0, 1)]);
    }

    #[test]
    fn structural_errors() {
        assert!(DiscreteSpacetime::from_matrix(vec![vec![t(0.0)], vec![t(0.0)]], vec![1.0; 2]).is_err());
        assert!(DiscreteSpacetime::from_matrix(vec![vec![t(0.0)]], vec![1.0, 2.0]).is_err());
        assert!(DiscreteSpacetime::from_matrix(vec![vec![t(0.0)]], vec![-1.0]).is_err());
        let s = DiscreteSpacetime::from_matrix(vec![vec![t(0.0)]], vec![1.0]).unwrap();
        assert!(s.with_coords(vec![vec![0.0], vec![1.0]]).is_err());
    }

    #[test]
    fn relation_boundaries() {
        let ell = vec![vec![t(0.0), t(0.0), ExtendedTime::POS_INF], vec![NI, t(0.0), NI], vec![NI, NI, t(0.0)]];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap();
        let r = s.relations();
        assert!(r.leq(0, 1) && !r.ll(0, 1));
        assert!(r.ll(0, 2));
        assert!(!r.leq(1, 2) && !r.leq(2, 1));
    }

    #[test]
    fn chain_futures_and_emeralds() {
        let ell = vec![vec![t(0.0), t(1.0), t(2.0)], vec![NI, t(0.0), t(1.0)], vec![NI, NI, t(0.0)]];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap();
        assert_eq!(s.future_past(0, ConeKind::ChronologicalFuture).unwrap(), vec![1, 2]);
        assert!(s.future_past(2, ConeKind::CausalFuture).unwrap().contains(&2));
        assert_eq!(s.future_past(2, ConeKind::ChronologicalPast).unwrap(), vec![0, 1]);
        assert!(s.future_past(3, ConeKind::CausalPast).is_err());
        assert!(s.emerald(&[1], &[1]).unwrap().contains(&1));
        assert_eq!(s.emerald(&[2], &[0]).unwrap(), Vec::<usize>::new());
        assert!(s.emerald(&[], &[0]).is_err());
    }

    #[test]
    fn generator_examples() {
        // lattice points at t ∈ {0, 1, 2}, x ∈ {0, 1}
        let s = DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 2.5), (-0.5, 1.5)], &[3, 2]).unwrap();
        assert_eq!(s.coords(0).unwrap(), &[0.0, 0.0]);
        let (a, b, c) = (0, 4, 3); // (0,0), (2,0), (1,1)
        assert_eq!(s.coords(b).unwrap(), &[2.0, 0.0]);
        assert_eq!(s.ell(a, b).to_f64(), 2.0);
        assert_eq!(s.ell(a, c), ExtendedTime::ZERO);
        assert_eq!(s.weight(0), 1.0);
        let l4 = DiscreteSpacetime::hyperbolic_lp_grid(2.0, 2, &[(-0.5, 2.5), (-0.5, 1.5)], &[3, 2]).unwrap();
        assert_eq!(l4.ell_matrix(), s.ell_matrix());
        assert!(Grid::new(&[(0.0, 1.0)], &[1]).is_err());
    }

    #[test]
    fn lattice_helper_places_centres() {
        let (ext, res) = Grid::lattice(&[-1.0, -1.0], &[1.0, 1.0], 0.25).unwrap();
        let g = Grid::new(&ext, &res).unwrap();
        assert_eq!(res, vec![9, 9]);
        let c = g.centre(g.len() - 1);
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] - 1.0).abs() < 1e-12);
        assert_eq!(g.nearest(&[0.01, -0.01]), Some(g.flat_index(&[4, 4])));
        assert_eq!(g.nearest(&[3.0, 0.0]), None);
    }
}
