use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};

use super::algebra::{AlgebraElement, LieAlgebra};
use super::nnls::nnls;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg;

/// Membership tolerance for the non-negative least squares residual.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Finitely generated closed convex cone inside an ambient subspace.
///
/// Computations run in orthonormal coordinates of the ambient subspace.
#[derive(Debug)]
pub struct ConvexCone {
    ambient: Subspace,
    generators: Vec<AlgebraElement>,
    // local coordinates, one generator per column
    local: DMatrix<f64>,
    tolerance: f64,
    facets: OnceLock<Facets>,
}

impl Clone for ConvexCone {
    fn clone(&self) -> Self {
        ConvexCone {
            ambient: self.ambient.clone(),
            generators: self.generators.clone(),
            local: self.local.clone(),
            tolerance: self.tolerance,
            facets: OnceLock::new(),
        }
    }
}

#[derive(Debug, Clone)]
struct Facets {
    /// Unit inward normals (local coordinates) of the facets within the span.
    normals: Vec<DVector<f64>>,
    /// Orthonormal basis of the span of the generators (local coordinates).
    span: DMatrix<f64>,
}

/// Outcome of a membership query.
#[derive(Debug, Clone)]
pub struct Membership {
    pub inside: bool,
    /// Distance from the query to the cone.
    pub residual: f64,
    /// Separating direction `r` with `⟨r, g⟩ ≤ 0` for all generators and
    /// `⟨r, x⟩ > 0`, in ambient coefficient coordinates (present when outside).
    pub certificate: Option<DVector<f64>>,
}

impl ConvexCone {
    pub fn new(ambient: &Subspace, generators: Vec<AlgebraElement>) -> Result<Self> {
        Self::with_tolerance(ambient, generators, MEMBERSHIP_TOL)
    }

    pub fn with_tolerance(ambient: &Subspace, generators: Vec<AlgebraElement>, tolerance: f64) -> Result<Self> {
        let k = ambient.dim();
        let mut local = DMatrix::zeros(k, generators.len());
        for (j, g) in generators.iter().enumerate() {
            let r = ambient.residual(g);
            if r > ambient.algebra().tolerance().max(1e-12) * g.norm().max(1.0) {
                return Err(Error::domain(format!(
                    "generator {j} does not lie in the ambient subspace (residual {r:.3e})"
                )));
            }
            local.set_column(j, &ambient.local_coords(g.coeffs()));
        }
        Ok(ConvexCone {
            ambient: ambient.clone(),
            generators,
            local,
            tolerance,
            facets: OnceLock::new(),
        })
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.ambient.algebra()
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn local_of(&self, x: &AlgebraElement) -> Result<DVector<f64>> {
        let r = self.ambient.residual(x);
        if r > self.ambient.algebra().tolerance().max(1e-12) * x.norm().max(1.0) {
            return Err(Error::domain(format!(
                "element is outside the ambient subspace (residual {r:.3e})"
            )));
        }
        Ok(self.ambient.local_coords(x.coeffs()))
    }

    /// Feasibility of `x = Σ λ_i g_i`, `λ_i ≥ 0`, with a Farkas-type certificate.
    pub fn membership(&self, x: &AlgebraElement) -> Result<Membership> {
        let v = self.local_of(x)?;
        self.membership_local(&v)
    }

    fn membership_local(&self, v: &DVector<f64>) -> Result<Membership> {
        let tol = self.tolerance * v.norm().max(1.0);
        if self.local.ncols() == 0 {
            let residual = v.norm();
            let inside = residual <= tol;
            return Ok(Membership {
                inside,
                residual,
                certificate: (!inside).then(|| self.ambient.frame() * v),
            });
        }
        let lambda = nnls(&self.local, v)?;
        let r = v - &self.local * &lambda;
        let residual = r.norm();
        let inside = residual <= tol;
        let certificate = if inside {
            None
        } else {
            let worst = (self.local.transpose() * &r).max();
            if worst > 1e-8 * v.norm().max(1.0) {
                return Err(Error::numeric(
                    "solver stopped without a separating certificate",
                    worst,
                ));
            }
            Some(self.ambient.frame() * &r)
        };
        Ok(Membership {
            inside,
            residual,
            certificate,
        })
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.membership(x).map(|m| m.inside).unwrap_or(false)
    }

    fn facets(&self) -> &Facets {
        self.facets.get_or_init(|| compute_facets(&self.local, self.tolerance))
    }

    /// Signed distance of `x` to the boundary measured against unit facet normals.
    ///
    /// Positive for interior points. `None` when the cone has empty interior
    /// in its ambient subspace; `+∞` when the cone is the whole ambient space.
    pub fn interior_margin(&self, x: &AlgebraElement) -> Result<Option<f64>> {
        let v = self.local_of(x)?;
        Ok(self.interior_margin_local(&v))
    }

    fn interior_margin_local(&self, v: &DVector<f64>) -> Option<f64> {
        let f = self.facets();
        if f.span.ncols() < self.ambient.dim() {
            return None;
        }
        Some(
            f.normals
                .iter()
                .map(|n| n.dot(v))
                .fold(f64::INFINITY, f64::min),
        )
    }

    /// Interior membership with margin at least the cone tolerance.
    pub fn contains_interior(&self, x: &AlgebraElement) -> bool {
        self.contains_interior_with(x, self.tolerance)
    }

    pub fn contains_interior_with(&self, x: &AlgebraElement, margin: f64) -> bool {
        matches!(self.interior_margin(x), Ok(Some(m)) if m >= margin)
    }

    /// Span of the generators equals the ambient subspace.
    pub fn is_generating(&self) -> bool {
        linalg::rank(&self.local, 1e-9) == self.ambient.dim()
    }

    /// `C ∩ −C = {0}`: no generator has its negative inside the cone.
    pub fn is_pointed(&self) -> bool {
        (0..self.local.ncols()).all(|j| {
            let g = self.local.column(j).into_owned();
            if g.norm() <= self.tolerance {
                return true;
            }
            match self.membership_local(&(-&g / g.norm())) {
                Ok(m) => !m.inside,
                Err(_) => true,
            }
        })
    }

    /// Dual cone `{y : B(x, y) ≥ 0 ∀x ∈ C}` for the Killing form restricted to
    /// the ambient subspace. Falls back to the coefficient inner product when
    /// the restriction is degenerate.
    pub fn dual(&self) -> Result<ConvexCone> {
        let k = self.ambient.dim();
        let f = self.facets();
        // Euclidean dual: facet normals within the span plus ± its complement.
        let mut euclid: Vec<DVector<f64>> = f.normals.clone();
        let comp = linalg::null_space(&f.span.transpose(), 1e-9);
        let comp = if f.span.ncols() == 0 {
            DMatrix::identity(k, k)
        } else {
            comp
        };
        for j in 0..comp.ncols() {
            let c = comp.column(j).into_owned();
            euclid.push(c.clone());
            euclid.push(-c);
        }
        let frame = self.ambient.frame();
        let kl = frame.transpose() * self.algebra().killing_matrix() * frame;
        let gram = match kl.clone().try_inverse() {
            Some(inv) if linalg::rank(&kl, 1e-9) == k => inv,
            _ => DMatrix::identity(k, k),
        };
        let alg = self.algebra();
        let gens = euclid
            .iter()
            .map(|z| {
                let y = &gram * z;
                let y = &y / y.norm().max(f64::MIN_POSITIVE);
                alg.element_from_vector(frame * y)
            })
            .collect();
        ConvexCone::with_tolerance(&self.ambient, gens, self.tolerance)
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_cone(&self, other: &ConvexCone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }
}

fn compute_facets(local: &DMatrix<f64>, tol: f64) -> Facets {
    let k = local.nrows();
    let span = linalg::column_space(local, 1e-9);
    let r = span.ncols();
    if r == 0 {
        return Facets {
            normals: Vec::new(),
            span: DMatrix::zeros(k, 0),
        };
    }
    // Normalized generators in span coordinates.
    let mut gens: Vec<DVector<f64>> = Vec::new();
    for j in 0..local.ncols() {
        let g = span.transpose() * local.column(j);
        let n = g.norm();
        if n > tol {
            gens.push(g / n);
        }
    }
    let supp_tol = 1e-10_f64.max(tol * 1e-1);
    let mut normals: Vec<DVector<f64>> = Vec::new();
    let push = |n: DVector<f64>, normals: &mut Vec<DVector<f64>>| {
        if !normals.iter().any(|m| (m - &n).norm() <= 1e-9) {
            normals.push(n);
        }
    };
    if r == 3 {
        if let Some(normals3) = facets_3d(&gens) {
            for n in normals3 {
                push(n, &mut normals);
            }
            return Facets {
                normals: normals.into_iter().map(|n| &span * n).collect(),
                span,
            };
        }
    }
    if r == 1 {
        let pos = gens.iter().any(|g| g[0] > 0.0);
        let neg = gens.iter().any(|g| g[0] < 0.0);
        if pos && !neg {
            push(DVector::from_element(1, 1.0), &mut normals);
        } else if neg && !pos {
            push(DVector::from_element(1, -1.0), &mut normals);
        }
    } else {
        let mut subset: Vec<usize> = (0..r - 1).collect();
        let m = gens.len();
        if m >= r - 1 {
            loop {
                let mut a = DMatrix::zeros(r - 1, r);
                for (row, &i) in subset.iter().enumerate() {
                    a.set_row(row, &gens[i].transpose());
                }
                let ns = linalg::null_space(&a, 1e-9);
                if ns.ncols() == 1 {
                    let n = ns.column(0).into_owned();
                    let dots: Vec<f64> = gens.iter().map(|g| g.dot(&n)).collect();
                    let min = dots.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = dots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    if min >= -supp_tol {
                        push(n, &mut normals);
                    } else if max <= supp_tol {
                        push(-n, &mut normals);
                    }
                }
                if !next_combination(&mut subset, m) {
                    break;
                }
            }
        }
    }
    Facets {
        normals: normals.into_iter().map(|n| &span * n).collect(),
        span,
    }
}

// Pointed 3-dimensional cones: convex hull of the central projection.
fn facets_3d(gens: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let mut c = DVector::zeros(3);
    for g in gens {
        c += g;
    }
    let cn = c.norm();
    if cn < 1e-9 {
        return None;
    }
    let c = c / cn;
    if gens.iter().any(|g| g.dot(&c) <= 1e-6) {
        return None;
    }
    // orthonormal basis of the plane orthogonal to c
    let pick = if c[0].abs() < 0.9 { DVector::from_vec(vec![1.0, 0.0, 0.0]) } else { DVector::from_vec(vec![0.0, 1.0, 0.0]) };
    let u = {
        let v = &pick - &c * pick.dot(&c);
        let n = v.norm();
        v / n
    };
    let w = cross(&c, &u);
    let mut pts: Vec<(f64, f64, usize)> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let s = g.dot(&c);
            (g.dot(&u) / s, g.dot(&w) / s, i)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let turn = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64, usize)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64, usize)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-14 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return None;
    }
    let mut normals = Vec::with_capacity(hull.len());
    for k in 0..hull.len() {
        let a = &gens[hull[k].2];
        let b = &gens[hull[(k + 1) % hull.len()].2];
        let mut n = cross(a, b);
        let len = n.norm();
        if len < 1e-15 {
            continue;
        }
        n /= len;
        if n.dot(&c) < 0.0 {
            n = -n;
        }
        normals.push(n);
    }
    Some(normals)
}

fn cross(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
