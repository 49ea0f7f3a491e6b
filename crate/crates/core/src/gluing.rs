//! Gluing maps on H_1 of the boundary 3-torus, as 3x3 integer matrices.
//!
//! Columns are the images of the domain basis (m, l, s) written in the
//! target basis (d, lambda1, lambda2).

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix3 = [[i64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GluingKind {
    KnotSurgery,
    LogTransform { p: i64, q: i64 },
    /// Multiplicity p, with phi(d) = p' * gamma + p * d and
    /// gamma = b * lambda1 + c * lambda2.
    GeneralLog { p: i64, p_prime: i64, b: i64, c: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMap {
    pub kind: GluingKind,
    pub matrix: Matrix3,
}

pub fn det3(m: &Matrix3) -> i128 {
    let e = |i: usize, j: usize| i128::from(m[i][j]);
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

impl GluingMap {
    pub fn det(&self) -> i128 {
        det3(&self.matrix)
    }

    fn checked(kind: GluingKind, matrix: Matrix3) -> Result<Self> {
        let g = GluingMap { kind, matrix };
        if g.det().abs() != 1 {
            return Err(Error::assertion(format!("gluing matrix {matrix:?} is not unimodular")));
        }
        Ok(g)
    }

    /// Image of a domain vector given in (m, l, s) coordinates.
    pub fn apply(&self, v: [i64; 3]) -> Result<[i64; 3]> {
        let mut out = [0i64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).try_fold(0i64, |acc, j| {
                self.matrix[i][j]
                    .checked_mul(v[j])
                    .and_then(|x| acc.checked_add(x))
                    .ok_or(Error::Overflow("gluing map"))
            })?;
        }
        Ok(out)
    }
}

/// m -> lambda1, l -> d, s -> lambda2.
pub fn knot_surgery_gluing() -> GluingMap {
    GluingMap::checked(GluingKind::KnotSurgery, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]).expect("permutation matrix")
}

/// m -> d, l -> lambda1 - pq d, s -> lambda2.
pub fn log_transform_gluing(p: i64, q: i64) -> Result<GluingMap> {
    require_coprime(p, q)?;
    let pq = p.checked_mul(q).ok_or(Error::Overflow("p*q"))?;
    GluingMap::checked(GluingKind::LogTransform { p, q }, [[1, -pq, 0], [0, 1, 0], [0, 0, 1]])
}

/// First column (p, p'b, p'c), completed to a unimodular matrix.
pub fn general_log_gluing(p: i64, p_prime: i64, b: i64, c: i64) -> Result<GluingMap> {
    if p < 1 {
        return Err(Error::invalid("multiplicity p must be positive"));
    }
    let mul = |x: i64, y: i64| x.checked_mul(y).ok_or(Error::Overflow("general log"));
    let v = [p, mul(p_prime, b)?, mul(p_prime, c)?];
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g != 1 {
        return Err(Error::invalid(format!("first column {v:?} is not primitive (gcd {g})")));
    }
    GluingMap::checked(GluingKind::GeneralLog { p, p_prime, b, c }, complete_primitive(v)?)
}

/// A unimodular matrix with first column `v`, for primitive `v`.
fn complete_primitive(v: [i64; 3]) -> Result<Matrix3> {
    let [v1, v2, v3] = v;
    if v2 == 0 && v3 == 0 {
        // v1 = +-1
        return Ok([[v1, 0, 0], [0, v1, 0], [0, 0, 1]]);
    }
    let e = v2.extended_gcd(&v3);
    let (g1, s, t) = (e.gcd, e.x, e.y);
    let f = v1.extended_gcd(&g1);
    if f.gcd != 1 {
        return Err(Error::invalid("vector is not primitive"));
    }
    let (x, y) = (f.x, f.y);
    let mul = |a: i64, b: i64| a.checked_mul(b).ok_or(Error::Overflow("unimodular completion"));
    Ok([
        [v1, -y, 0],
        [v2, mul(x, v2 / g1)?, -t],
        [v3, mul(x, v3 / g1)?, s],
    ])
}

fn require_coprime(p: i64, q: i64) -> Result<()> {
    if p < 1 || q < 1 {
        return Err(Error::invalid("p and q must be positive"));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    Ok(())
}

/// (u, v) with p v + q u = 1 and 0 <= u < p.
pub fn seifert_coefficients(p: i64, q: i64) -> Result<(i64, i64)> {
    require_coprime(p, q)?;
    let e = q.extended_gcd(&p);
    let u = e.x.mod_floor(&p);
    let v = (1 - i128::from(q) * i128::from(u)) / i128::from(p);
    let v = i64::try_from(v).map_err(|_| Error::Overflow("seifert coefficients"))?;
    Ok((u, v))
}
