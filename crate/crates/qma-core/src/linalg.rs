//! Exact linear algebra over a FieldContext: dense matrices for module
//! actions and sparse rows with echelon reduction for null spaces and
//! feasibility checks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{FieldContext, Scalar};

/// Dense row-major matrix of scalars. Representation matrices are mostly
/// zero (generalized permutations), so products skip zero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, ctx: &FieldContext) -> Self {
        Mat {
            rows,
            cols,
            a: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: &FieldContext) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            *m.at_mut(i, i) = ctx.one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.a[i * self.cols + j]
    }

    pub fn is_zero(&self, ctx: &FieldContext) -> bool {
        self.a.iter().all(|x| ctx.is_zero(x))
    }

    pub fn add(&self, other: &Mat, ctx: &FieldContext) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x = ctx.add(x, y);
        }
        out
    }

    pub fn sub(&self, other: &Mat, ctx: &FieldContext) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x = ctx.sub(x, y);
        }
        out
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldContext) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x = ctx.mul(x, c);
        }
        out
    }

    pub fn mul(&self, other: &Mat, ctx: &FieldContext) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols, ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.at(i, k);
                if ctx.is_zero(x) {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.at(k, j);
                    if ctx.is_zero(y) {
                        continue;
                    }
                    let p = ctx.mul(x, y);
                    let t = out.at_mut(i, j);
                    *t = ctx.add(t, &p);
                }
            }
        }
        out
    }

    pub fn trace(&self, ctx: &FieldContext) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = ctx.zero();
        for i in 0..self.rows {
            t = ctx.add(&t, self.at(i, i));
        }
        t
    }

    /// Row vector times matrix.
    pub fn act_on_row(&self, v: &[Scalar], ctx: &FieldContext) -> Result<Vec<Scalar>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = vec![ctx.zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if ctx.is_zero(x) {
                continue;
            }
            for j in 0..self.cols {
                let y = self.at(i, j);
                if ctx.is_zero(y) {
                    continue;
                }
                out[j] = ctx.add(&out[j], &ctx.mul(x, y));
            }
        }
        Ok(out)
    }

    pub fn rank(&self, ctx: &FieldContext) -> usize {
        let mut ech = Echelon::new(ctx.clone());
        for i in 0..self.rows {
            let row: SRow = (0..self.cols)
                .filter(|&j| !ctx.is_zero(self.at(i, j)))
                .map(|j| (j, self.at(i, j).clone()))
                .collect();
            ech.insert(row);
        }
        ech.rank()
    }

    pub fn is_invertible(&self, ctx: &FieldContext) -> bool {
        self.rows == self.cols && self.rank(ctx) == self.rows
    }

    /// Flatten to a coordinate row (row-major), for treating matrices as
    /// vectors in span computations.
    pub fn to_srow(&self, ctx: &FieldContext) -> SRow {
        self.a
            .iter()
            .enumerate()
            .filter(|(_, x)| !ctx.is_zero(x))
            .map(|(k, x)| (k, x.clone()))
            .collect()
    }

    pub fn from_srow(row: &SRow, rows: usize, cols: usize, ctx: &FieldContext) -> Mat {
        let mut m = Mat::zeros(rows, cols, ctx);
        for (&k, x) in row {
            m.a[k] = x.clone();
        }
        m
    }
}

/// Sparse row vector: column index -> nonzero coefficient.
pub type SRow = BTreeMap<usize, Scalar>;

pub fn srow_from_dense(v: &[Scalar], ctx: &FieldContext) -> SRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !ctx.is_zero(x))
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

pub fn srow_to_dense(row: &SRow, n: usize, ctx: &FieldContext) -> Vec<Scalar> {
    let mut v = vec![ctx.zero(); n];
    for (&j, x) in row {
        v[j] = x.clone();
    }
    v
}

fn srow_axpy(target: &mut SRow, c: &Scalar, src: &SRow, ctx: &FieldContext) {
    for (&j, x) in src {
        let add = ctx.mul(c, x);
        match target.entry(j) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !ctx.is_zero(&add) {
                    e.insert(add);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(e.get(), &add);
                if ctx.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }
}

/// Reduced row echelon accumulator: rows keyed by pivot column, pivot
/// coefficient 1, pivot column absent from every other stored row. The
/// stored basis is the canonical one for the row space.
pub struct Echelon {
    ctx: FieldContext,
    rows: BTreeMap<usize, SRow>,
}

impl Echelon {
    pub fn new(ctx: FieldContext) -> Self {
        Echelon {
            ctx,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce a row against the current basis, returning the residue.
    pub fn reduce(&self, mut row: SRow) -> SRow {
        loop {
            let Some((&lead, _)) = row.iter().next() else {
                return row;
            };
            match self.rows.get(&lead) {
                None => {
                    // eliminate any later pivot columns too
                    let cols: Vec<usize> = row
                        .keys()
                        .copied()
                        .filter(|j| self.rows.contains_key(j))
                        .collect();
                    if cols.is_empty() {
                        return row;
                    }
                    for j in cols {
                        if let Some(c) = row.get(&j).cloned() {
                            let pivot_row = self.rows[&j].clone();
                            srow_axpy(&mut row, &self.ctx.neg(&c), &pivot_row, &self.ctx);
                        }
                    }
                    if row.keys().next() == Some(&lead) {
                        return row;
                    }
                }
                Some(p) => {
                    let c = row[&lead].clone();
                    let p = p.clone();
                    srow_axpy(&mut row, &self.ctx.neg(&c), &p, &self.ctx);
                }
            }
        }
    }

    /// Insert a row; returns true iff it increased the rank.
    pub fn insert(&mut self, row: SRow) -> bool {
        let row = self.reduce(row);
        let Some((&pivot, c)) = row.iter().next() else {
            return false;
        };
        let inv = self.ctx.inv(c).expect("nonzero pivot in a field");
        let mut norm = SRow::new();
        for (&j, x) in &row {
            norm.insert(j, self.ctx.mul(x, &inv));
        }
        // back-substitute into existing rows to keep the basis reduced
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let c = self.rows[&k].get(&pivot).cloned();
            if let Some(c) = c {
                let r = self.rows.get_mut(&k).unwrap();
                let neg = self.ctx.neg(&c);
                let mut tmp = std::mem::take(r);
                srow_axpy(&mut tmp, &neg, &norm, &self.ctx);
                *r = tmp;
            }
        }
        self.rows.insert(pivot, norm);
        true
    }

    pub fn contains(&self, row: SRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Canonical basis rows ordered by pivot column.
    pub fn basis(&self) -> Vec<SRow> {
        self.rows.values().cloned().collect()
    }
}

/// Basis of the solution space of the homogeneous system `rows · x = 0`
/// in `n` unknowns, one canonical vector per free column.
pub fn null_space(rows: impl IntoIterator<Item = SRow>, n: usize, ctx: &FieldContext) -> Vec<SRow> {
    let mut ech = Echelon::new(ctx.clone());
    for r in rows {
        ech.insert(r);
    }
    let pivots: std::collections::BTreeSet<usize> = ech.pivots().collect();
    let mut basis = Vec::new();
    for f in 0..n {
        if pivots.contains(&f) {
            continue;
        }
        let mut sol = SRow::new();
        sol.insert(f, ctx.one());
        for (p, row) in &ech.rows {
            if let Some(c) = row.get(&f) {
                sol.insert(*p, ctx.neg(c));
            }
        }
        basis.push(sol);
    }
    basis
}

/// Feasibility of the inhomogeneous system `row · x = rhs`; returns one
/// solution if consistent.
pub fn solve(
    rows: impl IntoIterator<Item = (SRow, Scalar)>,
    n: usize,
    ctx: &FieldContext,
) -> Option<Vec<Scalar>> {
    // track the right-hand side as an extra column n
    let mut ech = Echelon::new(ctx.clone());
    for (mut row, rhs) in rows {
        if !ctx.is_zero(&rhs) {
            row.insert(n, rhs);
        }
        ech.insert(row);
    }
    if ech.rows.contains_key(&n) {
        return None; // a combination yields 0 = 1
    }
    let mut x = vec![ctx.zero(); n];
    for (p, row) in &ech.rows {
        if let Some(c) = row.get(&n) {
            // reduced row reads x_p + (free terms) - c = 0 at (x, -1);
            // free variables are set to 0
            x[*p] = c.clone();
        }
    }
    Some(x)
}
