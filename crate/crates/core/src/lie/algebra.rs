use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg;

/// Default absolute tolerance for structure checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Relative singular-value threshold used for linear independence of the basis.
pub const BASIS_RANK_TOL: f64 = 1e-9;

/// A real matrix Lie algebra given by an ordered basis of `n × n` matrices.
///
/// Structure constants are computed once at construction: `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
#[derive(Debug)]
pub struct LieAlgebra {
    name: String,
    matrix_size: usize,
    basis: Vec<DMatrix<f64>>,
    structure: Vec<f64>,
    tolerance: f64,
    // Pseudo-inverse of the n²×d coordinate matrix.
    coord_map: DMatrix<f64>,
    killing: DMatrix<f64>,
}

impl LieAlgebra {
    /// Builds the algebra and verifies independence, closure, antisymmetry and Jacobi.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<DMatrix<f64>>,
        tolerance: Option<f64>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let tolerance = tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::invalid("tolerance", "must be a finite non-negative real"));
        }
        if basis.is_empty() {
            return Err(Error::invalid("basis", "basis must not be empty"));
        }
        let n = basis[0].nrows();
        if n == 0 {
            return Err(Error::invalid("matrix_size", "matrix size must be positive"));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::invalid(
                    format!("basis[{i}]"),
                    format!("expected a {n}x{n} matrix, got {}x{}", b.nrows(), b.ncols()),
                ));
            }
        }
        let d = basis.len();
        let mut coord = DMatrix::zeros(n * n, d);
        for (j, b) in basis.iter().enumerate() {
            coord.set_column(j, &vectorize(b));
        }
        let r = linalg::rank(&coord, BASIS_RANK_TOL);
        if r < d {
            return Err(Error::invalid(
                "basis",
                format!("basis matrices are linearly dependent: rank {r} < dimension {d}"),
            ));
        }
        let coord_map = linalg::pseudo_inverse(&coord, 1e-14);

        let mut structure = vec![0.0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let br = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let v = vectorize(&br);
                let c = &coord_map * &v;
                let resid = (&coord * &c - &v).norm();
                if resid > tolerance * br.norm().max(1.0) {
                    return Err(Error::invalid(
                        format!("basis[{i}],basis[{j}]"),
                        format!("bracket leaves the span (residual {resid:.3e})"),
                    ));
                }
                for k in 0..d {
                    structure[(i * d + j) * d + k] = c[k];
                }
            }
        }

        let mut alg = LieAlgebra {
            name,
            matrix_size: n,
            basis,
            structure,
            tolerance,
            coord_map,
            killing: DMatrix::zeros(d, d),
        };
        let anti = alg.antisymmetry_residual();
        if anti > tolerance.max(1e-14) {
            return Err(Error::invalid(
                "basis",
                format!("structure constants not antisymmetric (residual {anti:.3e})"),
            ));
        }
        let jac = alg.jacobi_residual();
        if jac > tolerance.max(1e-14) {
            return Err(Error::invalid(
                "basis",
                format!("Jacobi identity fails (residual {jac:.3e})"),
            ));
        }
        let ads: Vec<DMatrix<f64>> = (0..d).map(|i| alg.ad_of_basis(i)).collect();
        let mut killing = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                killing[(i, j)] = (&ads[i] * &ads[j]).trace();
            }
        }
        alg.killing = killing;
        Ok(Arc::new(alg))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Gram matrix of the Killing form in the stored basis.
    pub fn killing_matrix(&self) -> &DMatrix<f64> {
        &self.killing
    }

    /// Linear combination `Σ c_i b_i` as a matrix.
    pub fn realize(&self, coeffs: &DVector<f64>) -> DMatrix<f64> {
        let n = self.matrix_size;
        let mut m = DMatrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                m += b * *c;
            }
        }
        m
    }

    /// Least-squares coordinates of a matrix together with the distance to the span.
    pub fn coordinates_with_residual(&self, m: &DMatrix<f64>) -> Result<(DVector<f64>, f64)> {
        let n = self.matrix_size;
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::domain(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let v = vectorize(m);
        let c = &self.coord_map * &v;
        let back = vectorize(&self.realize(&c));
        Ok((c, (back - v).norm()))
    }

    /// Coordinates of a matrix that must lie in the span.
    pub fn coordinates(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        let (c, resid) = self.coordinates_with_residual(m)?;
        if resid > self.tolerance * m.norm().max(1.0) {
            return Err(Error::domain(format!(
                "matrix is not in the span of {} (residual {resid:.3e})",
                self.name
            )));
        }
        Ok(c)
    }

    fn ad_of_basis(&self, i: usize) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |k, j| self.structure_constant(i, j, k))
    }

    /// Largest `|c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst
                        .max((self.structure_constant(i, j, k) + self.structure_constant(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest coefficient of `[[b_i,b_j],b_k] + [[b_j,b_k],b_i] + [[b_k,b_i],b_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        let br = |x: &[f64], j: usize| -> Vec<f64> {
            // [x, b_j] in coordinates
            let mut out = vec![0.0; d];
            for (i, xi) in x.iter().enumerate() {
                if *xi == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += xi * self.structure_constant(i, j, k);
                }
            }
            out
        };
        let basis_bracket = |i: usize, j: usize| -> Vec<f64> {
            (0..d).map(|k| self.structure_constant(i, j, k)).collect()
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let a = br(&basis_bracket(i, j), k);
                    let b = br(&basis_bracket(j, k), i);
                    let c = br(&basis_bracket(k, i), j);
                    for l in 0..d {
                        worst = worst.max((a[l] + b[l] + c[l]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Serializable document in the interchange format.
    pub fn to_document(&self) -> AlgebraDocument {
        AlgebraDocument {
            name: self.name.clone(),
            matrix_size: self.matrix_size,
            basis: self
                .basis
                .iter()
                .map(|b| {
                    let mut row_major = Vec::with_capacity(b.len());
                    for r in 0..b.nrows() {
                        for c in 0..b.ncols() {
                            row_major.push(b[(r, c)]);
                        }
                    }
                    row_major
                })
                .collect(),
            tolerance: Some(self.tolerance),
        }
    }

    pub fn from_document(doc: &AlgebraDocument) -> Result<Arc<Self>> {
        let n = doc.matrix_size;
        if n == 0 {
            return Err(Error::invalid("$.matrix_size", "must be a positive integer"));
        }
        let mut basis = Vec::with_capacity(doc.basis.len());
        for (i, flat) in doc.basis.iter().enumerate() {
            if flat.len() != n * n {
                return Err(Error::invalid(
                    format!("$.basis[{i}]"),
                    format!("expected {} entries, found {}", n * n, flat.len()),
                ));
            }
            basis.push(DMatrix::from_row_slice(n, n, flat));
        }
        Self::new(doc.name.clone(), basis, doc.tolerance).map_err(|e| match e {
            Error::Invalid { location, message } => Error::invalid(format!("$.{location}"), message),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Arc<Self>> {
        Self::from_document(&AlgebraDocument::parse(text)?)
    }

    /// Element with the given coefficients.
    pub fn element(self: &Arc<Self>, coeffs: &[f64]) -> AlgebraElement {
        assert_eq!(coeffs.len(), self.dim(), "coefficient vector has wrong length");
        AlgebraElement {
            algebra: Arc::clone(self),
            coeffs: DVector::from_column_slice(coeffs),
        }
    }

    pub fn element_from_vector(self: &Arc<Self>, coeffs: DVector<f64>) -> AlgebraElement {
        assert_eq!(coeffs.len(), self.dim(), "coefficient vector has wrong length");
        AlgebraElement {
            algebra: Arc::clone(self),
            coeffs,
        }
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        let mut v = DVector::zeros(self.dim());
        v[i] = 1.0;
        self.element_from_vector(v)
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        self.element_from_vector(DVector::zeros(self.dim()))
    }

    /// Element realized by a matrix in the span.
    pub fn element_from_matrix(self: &Arc<Self>, m: &DMatrix<f64>) -> Result<AlgebraElement> {
        Ok(self.element_from_vector(self.coordinates(m)?))
    }
}

fn vectorize(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Two algebra handles refer to the same algebra.
pub fn same_algebra(a: &LieAlgebra, b: &LieAlgebra) -> bool {
    std::ptr::eq(a, b) || (a.dim() == b.dim() && a.matrix_size == b.matrix_size && a.basis == b.basis)
}

/// Coefficient vector over the basis of a [`LieAlgebra`].
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Arc<LieAlgebra>,
    coeffs: DVector<f64>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.algebra.name, self.coeffs.as_slice())
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        self.algebra.realize(&self.coeffs)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.amax() <= tol
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "elements belong to different algebras ({} vs {})",
                self.algebra.name, other.algebra.name
            )))
        }
    }

    /// `[self, other] = Σ c[i][j][k] x_i y_j b_k`.
    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let d = self.algebra.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            let xi = self.coeffs[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                let yj = other.coeffs[j];
                if yj == 0.0 {
                    continue;
                }
                for k in 0..d {
                    out[k] += xi * yj * self.algebra.structure_constant(i, j, k);
                }
            }
        }
        Ok(self.algebra.element_from_vector(out))
    }

    /// Matrix of `ad self`; column `j` holds the coordinates of `[self, b_j]`.
    pub fn ad_matrix(&self) -> DMatrix<f64> {
        let d = self.algebra.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            let xi = self.coeffs[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    m[(k, j)] += xi * self.algebra.structure_constant(i, j, k);
                }
            }
        }
        m
    }

    /// Killing form `trace(ad x ∘ ad y)`.
    pub fn killing(&self, other: &AlgebraElement) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.coeffs.dot(&(self.algebra.killing_matrix() * &other.coeffs)))
    }

    /// `Ad(exp self)` as a `d × d` matrix.
    pub fn exp_ad(&self) -> DMatrix<f64> {
        self.ad_matrix().exp()
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        self.algebra.element_from_vector(&self.coeffs * s)
    }

    /// Applies a coefficient-space linear map.
    pub fn transform(&self, m: &DMatrix<f64>) -> AlgebraElement {
        self.algebra.element_from_vector(m * &self.coeffs)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert!(same_algebra(&self.algebra, &rhs.algebra), "algebra mismatch");
        self.algebra.element_from_vector(&self.coeffs + &rhs.coeffs)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert!(same_algebra(&self.algebra, &rhs.algebra), "algebra mismatch");
        self.algebra.element_from_vector(&self.coeffs - &rhs.coeffs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(-1.0)
    }
}

impl Mul<&AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        rhs.scale(self)
    }
}

/// JSON interchange form of an algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub name: String,
    pub matrix_size: usize,
    /// Each basis matrix flattened in row-major order.
    pub basis: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl AlgebraDocument {
    /// Parses with location-aware diagnostics. Basis entries may be flat
    /// row-major arrays or arrays of rows.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid("$", "expected a JSON object"))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid("$.name", "missing or not a string"))?
            .to_string();
        let matrix_size = obj
            .get("matrix_size")
            .and_then(Value::as_u64)
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::invalid("$.matrix_size", "missing or not a positive integer"))?
            as usize;
        let basis_v = obj
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("$.basis", "missing or not an array"))?;
        let mut basis = Vec::with_capacity(basis_v.len());
        for (i, entry) in basis_v.iter().enumerate() {
            let loc = format!("$.basis[{i}]");
            let arr = entry
                .as_array()
                .ok_or_else(|| Error::invalid(&loc, "expected an array"))?;
            let mut flat = Vec::with_capacity(matrix_size * matrix_size);
            for (j, x) in arr.iter().enumerate() {
                match x {
                    Value::Array(row) => {
                        for (k, y) in row.iter().enumerate() {
                            flat.push(y.as_f64().ok_or_else(|| {
                                Error::invalid(format!("{loc}[{j}][{k}]"), "expected a number")
                            })?);
                        }
                    }
                    other => flat.push(other.as_f64().ok_or_else(|| {
                        Error::invalid(format!("{loc}[{j}]"), "expected a number")
                    })?),
                }
            }
            if flat.len() != matrix_size * matrix_size {
                return Err(Error::invalid(
                    loc,
                    format!("expected {} entries, found {}", matrix_size * matrix_size, flat.len()),
                ));
            }
            basis.push(flat);
        }
        let tolerance = match obj.get("tolerance") {
            None | Some(Value::Null) => None,
            Some(t) => Some(
                t.as_f64()
                    .filter(|t| *t >= 0.0)
                    .ok_or_else(|| Error::invalid("$.tolerance", "expected a non-negative number"))?,
            ),
        };
        Ok(AlgebraDocument {
            name,
            matrix_size,
            basis,
            tolerance,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra documents always serialize")
    }
}
