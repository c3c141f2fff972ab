//! Integer matrix normal forms and the De Concini-Procesi PI-degree pipeline.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ncalg;
use crate::scalar::FieldContext;

/// Rectangular integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if *self.at(i, j) != -self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.at(k, j);
                    *out.at_mut(i, j) += t;
                }
            }
        }
        out
    }

    /// Parse the matrix file format: first line `rows cols`, then
    /// whitespace-separated integer rows.
    pub fn parse(text: &str) -> Result<IntMatrix> {
        let mut nums = text.split_whitespace();
        let bad = |msg: &str| Error::Syntax {
            pos: 0,
            msg: msg.into(),
        };
        let rows: usize = nums
            .next()
            .ok_or_else(|| bad("missing row count"))?
            .parse()
            .map_err(|_| bad("bad row count"))?;
        let cols: usize = nums
            .next()
            .ok_or_else(|| bad("missing column count"))?
            .parse()
            .map_err(|_| bad("bad column count"))?;
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let tok = nums.next().ok_or_else(|| bad("not enough entries"))?;
                *m.at_mut(i, j) = tok.parse().map_err(|_| bad("bad integer entry"))?;
            }
        }
        if nums.next().is_some() {
            return Err(bad("trailing entries"));
        }
        Ok(m)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ... >= 0.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }
}

/// Smith normal form by elementary row/column operations, pivoting on the
/// minimal nonzero absolute value for determinism.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        loop {
            // minimal nonzero |entry| in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d.at(i, j).is_zero()
                        && pivot.map_or(true, |(pi, pj)| {
                            d.at(i, j).abs() < d.at(pi, pj).abs()
                        })
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut v, t, pj);
            if d.at(t, t).is_negative() {
                negate_row(&mut d, &mut u, t);
            }

            let mut dirty = false;
            for i in t + 1..d.rows {
                if !d.at(i, t).is_zero() {
                    let q = d.at(i, t).div_floor(d.at(t, t));
                    row_axpy(&mut d, &mut u, i, t, &-q);
                    if !d.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d.at(t, j).is_zero() {
                    let q = d.at(t, j).div_floor(d.at(t, t));
                    col_axpy(&mut d, &mut v, j, t, &-q);
                    if !d.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }

            // pivot must divide every remaining entry for the chain to hold
            let mut fixed = false;
            'scan: for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(d.at(i, j) % d.at(t, t)).is_zero() {
                        // fold row i into row t and restart on this pivot
                        row_axpy(&mut d, &mut u, t, i, &BigInt::one());
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
    }
    SmithForm { u, d, v }
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let t = d.at(a, j).clone();
        *d.at_mut(a, j) = d.at(b, j).clone();
        *d.at_mut(b, j) = t;
    }
    for j in 0..u.cols {
        let t = u.at(a, j).clone();
        *u.at_mut(a, j) = u.at(b, j).clone();
        *u.at_mut(b, j) = t;
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let t = d.at(i, a).clone();
        *d.at_mut(i, a) = d.at(i, b).clone();
        *d.at_mut(i, b) = t;
    }
    for i in 0..v.rows {
        let t = v.at(i, a).clone();
        *v.at_mut(i, a) = v.at(i, b).clone();
        *v.at_mut(i, b) = t;
    }
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for j in 0..d.cols {
        let t = -d.at(r, j).clone();
        *d.at_mut(r, j) = t;
    }
    for j in 0..u.cols {
        let t = -u.at(r, j).clone();
        *u.at_mut(r, j) = t;
    }
}

/// row a += c * row b (tracked in U).
fn row_axpy(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, c: &BigInt) {
    for j in 0..d.cols {
        let t = d.at(b, j) * c;
        *d.at_mut(a, j) += t;
    }
    for j in 0..u.cols {
        let t = u.at(b, j) * c;
        *u.at_mut(a, j) += t;
    }
}

/// col a += c * col b (tracked in V).
fn col_axpy(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, c: &BigInt) {
    for i in 0..d.rows {
        let t = d.at(i, b) * c;
        *d.at_mut(i, a) += t;
    }
    for i in 0..v.rows {
        let t = v.at(i, b) * c;
        *v.at_mut(i, a) += t;
    }
}

/// Cardinality of the image of `Z^n -> Z^n -> (Z/m)^n` through H, via the
/// invariant factors: h = prod_i m / gcd(d_i, m), with gcd(0, m) = m.
pub fn image_cardinality_mod(h: &IntMatrix, m: u64) -> BigInt {
    assert_eq!(h.rows, h.cols, "matrix must be square");
    let snf = smith_normal_form(h);
    let mb = BigInt::from(m);
    let mut out = BigInt::one();
    for d in snf.invariant_factors() {
        out *= &mb / d.gcd(&mb);
    }
    out
}

/// PI degree of the quantum affine space with antisymmetric exponent matrix
/// H at a primitive m-th root of unity: the exact square root of the image
/// cardinality.
pub fn pi_degree(h: &IntMatrix, m: u64) -> Result<BigInt> {
    let card = image_cardinality_mod(h, m);
    let root = card.sqrt();
    if &root * &root != card {
        return Err(Error::NotAPerfectSquare(card.to_string()));
    }
    Ok(root)
}

/// PI degree of the rank-n Dipper-Donkin algebra at a primitive m-th root of
/// unity, computed through the derivation-erased commutation matrix.
pub fn pi_degree_dd(n: usize, m: u64) -> Result<BigInt> {
    let field = FieldContext::cyclotomic(m)?;
    let p = ncalg::dd(n, field)?;
    let h = crate::structure::quasipolynomial_matrix(&p)?;
    pi_degree(&h, m)
}

/// Closed form for `pi_degree_dd`: m^(n^2/2) for even n, m^((n^2-1)/2) for
/// odd n.
pub fn pi_degree_dd_closed_form(n: usize, m: u64) -> BigInt {
    let e = if n % 2 == 0 {
        n * n / 2
    } else {
        (n * n - 1) / 2
    };
    BigInt::from(m).pow(e as u32)
}
