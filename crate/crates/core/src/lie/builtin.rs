//! Shipped matrix realizations.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::algebra::{AlgebraElement, LieAlgebra};
use crate::error::{Error, Result};

/// `sl(2, ℝ)` with basis `h = diag(1/2, −1/2)`, `e = E₁₂`, `f = E₂₁`.
///
/// Brackets: `[h,e] = e`, `[h,f] = −f`, `[e,f] = 2h`.
pub fn sl2() -> Arc<LieAlgebra> {
    let h = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
    let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let f = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    LieAlgebra::new("sl2", vec![h, e, f], None).expect("sl2 basis is valid")
}

/// Index of the generator `M_{ij}` (`i < j`) in the `so(p, q)` basis order.
pub fn so_index(size: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < size, "need i < j < size");
    // pairs are listed lexicographically
    (0..i).map(|r| size - 1 - r).sum::<usize>() + (j - i - 1)
}

/// `so(p, q)` in the quadratic form `diag(+1 ×p, −1 ×q)`.
///
/// Basis `M_ij = η_ii E_ji − η_jj E_ij` for `i < j`; for a positive `i` and a
/// negative `j` this is the symmetric boost `E_ij + E_ji`.
pub fn so(p: usize, q: usize) -> Result<Arc<LieAlgebra>> {
    let n = p + q;
    if n < 2 {
        return Err(Error::domain("so(p,q) needs p + q >= 2"));
    }
    let eta: Vec<f64> = (0..n).map(|i| if i < p { 1.0 } else { -1.0 }).collect();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = DMatrix::zeros(n, n);
            m[(j, i)] = eta[i];
            m[(i, j)] = -eta[j];
            basis.push(m);
        }
    }
    LieAlgebra::new(format!("so({p},{q})"), basis, None)
}

/// Lorentz algebra `so(1, d)` acting on `ℝ^{1,d}`.
pub fn so_1d(d: usize) -> Result<Arc<LieAlgebra>> {
    so(1, d)
}

/// `so(2, d)` acting on `ℝ^{2,d}`.
pub fn so_2d(d: usize) -> Result<Arc<LieAlgebra>> {
    so(2, d)
}

/// Boost in the `x₀x₁` plane of `so(1, d)`, an Euler element.
pub fn lorentz_boost(alg: &Arc<LieAlgebra>) -> AlgebraElement {
    alg.basis_element(so_index(alg.matrix_size(), 0, 1))
}

/// Boost mixing the first positive and first negative direction of `so(2, d)`.
pub fn so2d_euler(alg: &Arc<LieAlgebra>) -> AlgebraElement {
    alg.basis_element(so_index(alg.matrix_size(), 0, 2))
}

fn realify(re: &[f64], im: &[f64], n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_row_slice(n, n, re);
    let b = DMatrix::from_row_slice(n, n, im);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&a);
    m.view_mut((0, n), (n, n)).copy_from(&(-&b));
    m.view_mut((n, 0), (n, n)).copy_from(&b);
    m.view_mut((n, n), (n, n)).copy_from(&a);
    m
}

/// `su(1,1)` realified to 4×4 real matrices.
///
/// Basis: `diag(i, −i)/2`, `[[0,1],[1,0]]/2` (an Euler element), `[[0,i],[−i,0]]/2`.
pub fn su11() -> Arc<LieAlgebra> {
    let u1 = realify(&[0.0; 4], &[0.5, 0.0, 0.0, -0.5], 2);
    let u2 = realify(&[0.0, 0.5, 0.5, 0.0], &[0.0; 4], 2);
    let u3 = realify(&[0.0; 4], &[0.0, 0.5, -0.5, 0.0], 2);
    LieAlgebra::new("su(1,1)", vec![u1, u2, u3], None).expect("su(1,1) basis is valid")
}

/// Looks up a shipped algebra by name: `sl2`, `su11`, `so1,d`, `so2,d`
/// (parentheses and the spelling `so(1,d)` are accepted).
pub fn by_name(name: &str) -> Result<Arc<LieAlgebra>> {
    let key: String = name
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')' && *c != '_' && *c != '-')
        .collect::<String>()
        .to_lowercase();
    match key.as_str() {
        "sl2" | "sl2r" => return Ok(sl2()),
        "su11" | "su1,1" => return Ok(su11()),
        _ => {}
    }
    if let Some(rest) = key.strip_prefix("so") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() == 2 {
            if let (Ok(p), Ok(q)) = (parts[0].parse::<usize>(), parts[1].parse::<usize>()) {
                if (p == 1 || p == 2) && (1..=4).contains(&q) {
                    return so(p, q);
                }
            }
        }
    }
    Err(Error::Unsupported(format!("unknown built-in algebra '{name}'")))
}

/// Named elements of the shipped algebras (`h`, `e`, `f` for sl2; `euler`
/// for the standard Euler element of each family).
pub fn named_element(alg: &Arc<LieAlgebra>, name: &str) -> Result<AlgebraElement> {
    let n = alg.matrix_size();
    let aname = alg.name();
    let found = match (aname, name) {
        ("sl2", "h" | "euler") => Some(alg.basis_element(0)),
        ("sl2", "e") => Some(alg.basis_element(1)),
        ("sl2", "f") => Some(alg.basis_element(2)),
        ("su(1,1)", "u1") => Some(alg.basis_element(0)),
        ("su(1,1)", "u2" | "euler") => Some(alg.basis_element(1)),
        ("su(1,1)", "u3") => Some(alg.basis_element(2)),
        (a, "euler" | "boost") if a.starts_with("so(1,") => Some(lorentz_boost(alg)),
        (a, "euler") if a.starts_with("so(2,") && n >= 3 => Some(so2d_euler(alg)),
        _ => None,
    };
    if let Some(x) = found {
        return Ok(x);
    }
    // Fallback: b<k> selects the k-th basis element.
    if let Some(k) = name.strip_prefix('b').and_then(|s| s.parse::<usize>().ok()) {
        if k < alg.dim() {
            return Ok(alg.basis_element(k));
        }
    }
    Err(Error::domain(format!("no element named '{name}' in {aname}")))
}
