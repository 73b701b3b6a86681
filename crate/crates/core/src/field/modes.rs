use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{trapezoid, tridiag};
use crate::schrodinger::Grid;
use crate::tolerances::NULLING;

/// Normal modes of −∂ₓ² + m² + 2J₂(x) with hard walls at the grid ends.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeBasis {
    pub mass: f64,
    pub grid: Grid,
    /// J₂ on every grid point.
    pub j2: Vec<f64>,
    /// ω_l, ascending.
    pub omegas: Vec<f64>,
    /// ψ_l on every grid point (zero at the walls), Σψ²h = 1.
    pub modes: Vec<Vec<f64>>,
    /// Modes with ω_l² below the continuum threshold m² + 2J₂(walls).
    pub n_bound: usize,
}

impl ModeBasis {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Number of interior lattice sites, the size of a complete basis.
    pub fn sites(&self) -> usize {
        self.grid.n_points - 2
    }

    pub fn is_complete(&self) -> bool {
        self.len() == self.sites()
    }

    pub fn continuum_threshold(&self) -> f64 {
        let n = self.j2.len();
        self.mass * self.mass + 2.0 * self.j2[0].min(self.j2[n - 1])
    }

    /// ∫ψ_l(x) v(x) dx by the trapezoid rule.
    pub fn project(&self, l: usize, v: &[f64]) -> f64 {
        let prod: Vec<f64> = self.modes[l].iter().zip(v).map(|(a, b)| a * b).collect();
        trapezoid(&prod, self.grid.spacing())
    }

    /// Dressed mass profile m² + 2J₂ on the interior sites.
    pub fn mass_profile(&self) -> Vec<f64> {
        let m2 = self.mass * self.mass;
        self.j2[1..self.j2.len() - 1].iter().map(|j| m2 + 2.0 * j).collect()
    }
}

/// Bound modes plus the lowest `n_continuum` box-quantized continuum modes.
/// `n_continuum = usize::MAX` returns the complete lattice basis.
pub fn mode_decomposition(j2: &[f64], m: f64, grid: &Grid, n_continuum: usize) -> Result<ModeBasis> {
    if j2.len() != grid.n_points {
        return Err(Error::DimensionMismatch(j2.len(), grid.n_points));
    }
    if !(m > 0.0) || j2.iter().any(|v| !v.is_finite()) {
        return Err(invalid("mode decomposition needs m > 0 and finite J₂"));
    }
    let h = grid.spacing();
    let c = 1.0 / (h * h);
    let interior = &j2[1..grid.n_points - 1];
    let diag: Vec<f64> = interior.iter().map(|j| 2.0 * c + m * m + 2.0 * j).collect();
    let off = vec![-c; diag.len().saturating_sub(1)];
    let n = diag.len();
    let threshold = m * m + 2.0 * j2[0].min(j2[grid.n_points - 1]);
    let n_bound = tridiag::sturm_count(&diag, &off, threshold);
    let want = n_bound.saturating_add(n_continuum).min(n);
    let (values, vectors) = if want == n {
        tridiag::full_eigen(&diag, &off)
    } else {
        tridiag::lowest_eigenpairs(&diag, &off, want)
    };
    if let Some(&w2) = values.first() {
        if w2 <= 0.0 {
            return Err(Error::UnstableVacuum(format!("lowest mode has ω² = {w2:e}")));
        }
    }
    let scale = 1.0 / h.sqrt();
    let modes = vectors
        .into_iter()
        .map(|v| {
            let mut psi = Vec::with_capacity(grid.n_points);
            psi.push(0.0);
            // sign: positive at the largest component
            let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
            let s = scale * pivot.signum();
            psi.extend(v.iter().map(|x| x * s));
            psi.push(0.0);
            psi
        })
        .collect();
    Ok(ModeBasis {
        mass: m,
        grid: *grid,
        j2: j2.to_vec(),
        omegas: values.iter().map(|w2| w2.sqrt()).collect(),
        modes,
        n_bound,
    })
}

/// J₂ sampled from a function on every grid point.
pub fn sample_on_grid(grid: &Grid, f: impl Fn(f64) -> f64) -> Vec<f64> {
    grid.points().into_iter().map(f).collect()
}

/// J₁(t, x) on a time grid, one spatial row per time on the basis grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeField {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl SpacetimeField {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(invalid("field needs one spatial row per time (≥ 2 times)"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("field times must increase"));
        }
        Ok(Self { times, values })
    }

    /// f(t)h(x) on the given times and grid.
    pub fn separable(times: Vec<f64>, grid: &Grid, f: impl Fn(f64) -> f64, h: &[f64]) -> Result<Self> {
        if h.len() != grid.n_points {
            return Err(Error::DimensionMismatch(h.len(), grid.n_points));
        }
        let values = times.iter().map(|&t| h.iter().map(|v| f(t) * v).collect()).collect();
        Self::new(times, values)
    }
}

/// Integrate samples on a possibly non-uniform increasing grid: composite
/// Simpson when uniform with an odd count, trapezoid otherwise.
fn integrate_samples(t: &[f64], v: &[Complex64]) -> Complex64 {
    let n = t.len();
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    let uniform = t.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if uniform && n % 2 == 1 && n >= 3 {
        let mut acc = v[0] + v[n - 1];
        for (i, x) in v.iter().enumerate().take(n - 1).skip(1) {
            acc += *x * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (h / 3.0)
    } else {
        t.windows(2).zip(v.windows(2)).map(|(tt, vv)| (vv[0] + vv[1]) * (0.5 * (tt[1] - tt[0]))).sum()
    }
}

/// J̃₁(ω_l, l) = ∫dt e^{iω_l t} ∫dx ψ_l(x) J₁(t, x), space first.
pub fn source_overlap(field: &SpacetimeField, basis: &ModeBasis) -> Result<Vec<Complex64>> {
    if let Some(row) = field.values.iter().find(|r| r.len() != basis.grid.n_points) {
        return Err(Error::DimensionMismatch(row.len(), basis.grid.n_points));
    }
    let spatial: Vec<Vec<f64>> = field.values.iter().map(|row| (0..basis.len()).map(|l| basis.project(l, row)).collect()).collect();
    Ok((0..basis.len())
        .map(|l| {
            let w = basis.omegas[l];
            let v: Vec<Complex64> = field
                .times
                .iter()
                .zip(&spatial)
                .map(|(&t, s)| Complex64::from_polar(s[l], w * t))
                .collect();
            integrate_samples(&field.times, &v)
        })
        .collect())
}

/// Spatial source profile h(x) on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceProfile {
    pub grid: Grid,
    pub values: Vec<f64>,
    /// Whether ∫h² = 1 was imposed.
    pub normalized: bool,
}

impl SourceProfile {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::DimensionMismatch(values.len(), grid.n_points));
        }
        Ok(Self {
            grid,
            values,
            normalized: false,
        })
    }

    /// exp(−(x−c)²/(2w²)), set to zero beyond 8w so the support is compact.
    pub fn gaussian(grid: Grid, center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(invalid("Gaussian width must be positive"));
        }
        let values = grid
            .points()
            .into_iter()
            .map(|x| {
                let u = (x - center) / width;
                if u.abs() > 8.0 {
                    0.0
                } else {
                    (-0.5 * u * u).exp()
                }
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn norm(&self) -> f64 {
        trapezoid(&self.values.iter().map(|v| v * v).collect::<Vec<_>>(), self.grid.spacing()).sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(invalid("cannot normalize a zero profile"));
        }
        self.values.iter_mut().for_each(|v| *v /= n);
        self.normalized = true;
        Ok(self)
    }
}

/// Ω = g⟨ψ_target|∫h φ|vac⟩ = g∫hψ_target dx/√(2ω_target).
pub fn rabi_frequency(g: f64, h: &SourceProfile, basis: &ModeBasis, target: usize) -> Result<f64> {
    if target >= basis.n_bound {
        return Err(invalid(format!("mode {target} is not bound ({} bound modes)", basis.n_bound)));
    }
    if h.values.len() != basis.grid.n_points {
        return Err(Error::DimensionMismatch(h.values.len(), basis.grid.n_points));
    }
    Ok(g * basis.project(target, &h.values) / (2.0 * basis.omegas[target]).sqrt())
}

/// ⟨l|∫hφ|vac⟩ for every mode in the basis.
pub fn emission_amplitudes(h: &SourceProfile, basis: &ModeBasis) -> Vec<f64> {
    (0..basis.len()).map(|l| basis.project(l, &h.values) / (2.0 * basis.omegas[l]).sqrt()).collect()
}

/// Profile with maximal overlap on `target` and vanishing one-particle matrix
/// elements for every mode in `nulled`, restricted to `support` when given.
pub fn design_source_profile(basis: &ModeBasis, target: usize, nulled: &[usize], support: Option<(f64, f64)>) -> Result<SourceProfile> {
    if target >= basis.len() || nulled.iter().any(|&n| n >= basis.len()) {
        return Err(invalid("mode index outside the basis"));
    }
    let xs = basis.grid.points();
    let inside = |x: f64| support.is_none_or(|(a, b)| x >= a && x <= b);
    let restrict = |l: usize| -> Vec<f64> { basis.modes[l].iter().zip(&xs).map(|(v, &x)| if inside(x) { *v } else { 0.0 }).collect() };
    let h = basis.grid.spacing();
    let dot = |a: &[f64], b: &[f64]| trapezoid(&a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<_>>(), h);
    // orthonormal span of the restricted nulled modes, modified Gram-Schmidt run twice
    let mut span: Vec<Vec<f64>> = Vec::new();
    for &n in nulled {
        let mut v = restrict(n);
        for _ in 0..2 {
            for q in &span {
                let c = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-12 {
            v.iter_mut().for_each(|a| *a /= nv);
            span.push(v);
        }
    }
    let seed = restrict(target);
    let seed_norm = dot(&seed, &seed).sqrt();
    let mut v = seed.clone();
    for _ in 0..2 {
        for q in &span {
            let c = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
    let nv = dot(&v, &v).sqrt();
    if !(nv > 1e-8 * seed_norm) || seed_norm == 0.0 {
        return Err(Error::InfeasibleNulling);
    }
    v.iter_mut().for_each(|a| *a /= nv);
    let profile = SourceProfile {
        grid: basis.grid,
        values: v,
        normalized: true,
    };
    for &n in nulled {
        let amp = basis.project(n, &profile.values) / (2.0 * basis.omegas[n]).sqrt();
        if amp.abs() >= NULLING {
            return Err(Error::InfeasibleNulling);
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn well(grid: &Grid) -> Vec<f64> {
        sample_on_grid(grid, |x| -0.6 / x.cosh().powi(2))
    }

    #[test]
    fn free_box_modes() {
        let grid = Grid::symmetric(10.0, 401).unwrap();
        let b = mode_decomposition(&vec![0.0; 401], 1.0, &grid, 5).unwrap();
        assert_eq!(b.n_bound, 0);
        let h = grid.spacing();
        let l = grid.x_max - grid.x_min;
        for (k, w) in b.omegas.iter().enumerate() {
            // lattice dispersion of the box momentum p = (k+1)π/L
            let p = (k + 1) as f64 * PI / l;
            let lattice = (2.0 / h * (0.5 * p * h).sin()).powi(2);
            assert!((w * w - (1.0 + lattice)).abs() < 1e-9);
            assert!((w * w - (1.0 + p * p)).abs() < 1e-4);
        }
    }

    #[test]
    fn bound_mode_below_mass_and_orthonormal() {
        let grid = Grid::symmetric(20.0, 801).unwrap();
        let b = mode_decomposition(&well(&grid), 1.0, &grid, 10).unwrap();
        assert!(b.n_bound >= 1 && b.omegas[0] < 1.0);
        for i in 0..b.len() {
            for j in 0..b.len() {
                let o = b.project(i, &b.modes[j]);
                assert!((o - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn unstable_vacuum() {
        let grid = Grid::symmetric(20.0, 801).unwrap();
        let j2 = sample_on_grid(&grid, |x| if x.abs() < 5.0 { -2.0 } else { 0.0 });
        assert!(matches!(mode_decomposition(&j2, 1.0, &grid, 0), Err(Error::UnstableVacuum(_))));
    }

    #[test]
    fn rabi_examples() {
        let grid = Grid::symmetric(20.0, 801).unwrap();
        let b = mode_decomposition(&well(&grid), 1.0, &grid, 4).unwrap();
        let h = SourceProfile::new(grid, b.modes[0].clone()).unwrap().normalize().unwrap();
        let om = rabi_frequency(0.3, &h, &b, 0).unwrap();
        assert!((om - 0.3 / (2.0 * b.omegas[0]).sqrt()).abs() < 1e-10);
        assert!((rabi_frequency(0.6, &h, &b, 0).unwrap() - 2.0 * om).abs() < 1e-14);
        let odd = SourceProfile::new(grid, sample_on_grid(&grid, |x| x * (-x * x).exp())).unwrap();
        assert!(rabi_frequency(1.0, &odd, &b, 0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nulling_design() {
        let grid = Grid::symmetric(20.0, 801).unwrap();
        let b = mode_decomposition(&well(&grid), 1.0, &grid, 6).unwrap();
        let support = Some((-4.0, 4.0));
        let free = design_source_profile(&b, 0, &[], support).unwrap();
        let nulled = design_source_profile(&b, 0, &[b.n_bound + 1], support).unwrap();
        let amps = emission_amplitudes(&nulled, &b);
        assert!(amps[b.n_bound + 1].abs() < 1e-10);
        let unconstrained = b.project(0, &free.values);
        assert!(b.project(0, &nulled.values) <= unconstrained + 1e-12);
        assert!(b.project(0, &nulled.values) > 0.5 * unconstrained);
        assert!(matches!(design_source_profile(&b, 0, &[0], support), Err(Error::InfeasibleNulling)));
    }

    #[test]
    fn overlap_selects_mode() {
        let grid = Grid::symmetric(20.0, 401).unwrap();
        let b = mode_decomposition(&well(&grid), 1.0, &grid, 4).unwrap();
        let times: Vec<f64> = (0..201).map(|i| -1.0 + 0.01 * i as f64).collect();
        let bump = |t: f64| (-(t * t) / 0.02).exp();
        let f = SpacetimeField::separable(times, &grid, bump, &b.modes[2]).unwrap();
        let j = source_overlap(&f, &b).unwrap();
        for (l, v) in j.iter().enumerate() {
            if l != 2 {
                assert!(v.norm() < 1e-9 * j[2].norm());
            }
        }
        let zero = SpacetimeField::new(vec![0.0, 1.0], vec![vec![0.0; 401]; 2]).unwrap();
        assert!(source_overlap(&zero, &b).unwrap().iter().all(|v| v.norm() == 0.0));
    }
}
