//! Module analysis: absolute simplicity by Burnside span closure, invariant
//! closures, complement feasibility, commutants with their radicals, and
//! indecomposability certificates.

use crate::error::{Error, Result};
use crate::linalg::{null_space, solve, srow_from_dense, srow_to_dense, Echelon, Mat, SRow};
use crate::repmod::{intertwiners, Representation};
use crate::scalar::{FieldContext, Scalar};

/// A subspace of K^ambient carried by its canonical reduced echelon basis,
/// so equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    basis: Vec<SRow>,
}

impl Subspace {
    pub fn from_rows(rows: impl IntoIterator<Item = SRow>, ambient: usize, ctx: &FieldContext) -> Self {
        let mut ech = Echelon::new(ctx.clone());
        for r in rows {
            ech.insert(r);
        }
        Subspace {
            ambient,
            basis: ech.basis(),
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>], ambient: usize, ctx: &FieldContext) -> Self {
        Self::from_rows(rows.iter().map(|v| srow_from_dense(v, ctx)), ambient, ctx)
    }

    /// Span of a subset of standard basis vectors.
    pub fn coordinate(indices: &[usize], ambient: usize, ctx: &FieldContext) -> Self {
        Self::from_rows(
            indices.iter().map(|&i| {
                let mut r = SRow::new();
                r.insert(i, ctx.one());
                r
            }),
            ambient,
            ctx,
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SRow] {
        &self.basis
    }

    pub fn basis_dense(&self, ctx: &FieldContext) -> Vec<Vec<Scalar>> {
        self.basis
            .iter()
            .map(|r| srow_to_dense(r, self.ambient, ctx))
            .collect()
    }

    pub fn contains(&self, row: SRow, ctx: &FieldContext) -> bool {
        let mut ech = Echelon::new(ctx.clone());
        for r in &self.basis {
            ech.insert(r.clone());
        }
        ech.contains(row)
    }

    fn echelon(&self, ctx: &FieldContext) -> Echelon {
        let mut ech = Echelon::new(ctx.clone());
        for r in &self.basis {
            ech.insert(r.clone());
        }
        ech
    }
}

/// Dimension of the span closure of all word images: seeded with the
/// identity, grown by right-multiplication with generators until stable.
pub fn generated_algebra_dim(r: &Representation) -> usize {
    let ctx = r.field();
    let t = r.dim;
    let mut ech = Echelon::new(ctx.clone());
    let id = Mat::identity(t, ctx);
    ech.insert(id.to_srow(ctx));
    let mut work = vec![id];
    while let Some(m) = work.pop() {
        for g in &r.action {
            let n = m.mul(g, ctx);
            let row = n.to_srow(ctx);
            if !row.is_empty() && ech.insert(row) {
                work.push(n);
            }
        }
    }
    ech.rank()
}

pub fn is_absolutely_simple(r: &Representation) -> bool {
    generated_algebra_dim(r) == r.dim * r.dim
}

/// Smallest subspace containing the given vectors and stable under every
/// generator action.
pub fn invariant_closure(r: &Representation, vectors: &[Vec<Scalar>]) -> Result<Subspace> {
    let ctx = r.field();
    for v in vectors {
        if v.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                got: v.len(),
            });
        }
    }
    let mut ech = Echelon::new(ctx.clone());
    let mut work: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        if ech.insert(srow_from_dense(v, ctx)) {
            work.push(v.clone());
        }
    }
    while let Some(v) = work.pop() {
        for g in &r.action {
            let u = g.act_on_row(&v, ctx)?;
            if ech.insert(srow_from_dense(&u, ctx)) {
                work.push(u);
            }
        }
    }
    Ok(Subspace {
        ambient: r.dim,
        basis: ech.basis(),
    })
}

pub fn is_invariant(r: &Representation, w: &Subspace) -> bool {
    let ctx = r.field();
    let ech = w.echelon(ctx);
    for b in w.basis_dense(ctx) {
        for g in &r.action {
            let u = match g.act_on_row(&b, ctx) {
                Ok(u) => u,
                Err(_) => return false,
            };
            if !ech.contains(srow_from_dense(&u, ctx)) {
                return false;
            }
        }
    }
    true
}

/// Does the inclusion W -> R split? Feasibility of an equivariant projection
/// pi with image in W and pi restricted to W the identity; its kernel is
/// then an invariant complement. Linear, no idempotent search.
pub fn has_invariant_complement(r: &Representation, w: &Subspace) -> Result<bool> {
    let ctx = r.field();
    if w.ambient != r.dim {
        return Err(Error::DimensionMismatch {
            expected: r.dim,
            got: w.ambient,
        });
    }
    if !is_invariant(r, w) {
        return Err(Error::NotInvariant);
    }
    if w.dim() == 0 || w.dim() == r.dim {
        return Ok(true);
    }
    let t = r.dim;
    let var = |i: usize, j: usize| i * t + j;
    let mut rows: Vec<(SRow, Scalar)> = Vec::new();
    // equivariance: A_g P = P A_g for every generator (pi(v) = v P on rows)
    for g in &r.action {
        for i in 0..t {
            for j in 0..t {
                let mut row = SRow::new();
                for k in 0..t {
                    let c = g.at(i, k);
                    if !ctx.is_zero(c) {
                        let e = row.entry(var(k, j)).or_insert_with(|| ctx.zero());
                        *e = ctx.add(e, c);
                    }
                    let c = g.at(k, j);
                    if !ctx.is_zero(c) {
                        let e = row.entry(var(i, k)).or_insert_with(|| ctx.zero());
                        *e = ctx.sub(e, c);
                    }
                }
                row.retain(|_, v| !ctx.is_zero(v));
                if !row.is_empty() {
                    rows.push((row, ctx.zero()));
                }
            }
        }
    }
    // image in W: each row of P satisfies the vanishing functionals of W
    // (non-pivot coordinate minus pivot-weighted basis combination)
    let ech = w.echelon(ctx);
    let pivots: std::collections::BTreeSet<usize> = ech.pivots().collect();
    let wbasis = w.basis_dense(ctx);
    let pivot_list: Vec<usize> = pivots.iter().copied().collect();
    for i in 0..t {
        for j in 0..t {
            if pivots.contains(&j) {
                continue;
            }
            let mut row = SRow::new();
            row.insert(var(i, j), ctx.one());
            for (bi, &p) in pivot_list.iter().enumerate() {
                let c = &wbasis[bi][j];
                if !ctx.is_zero(c) {
                    row.insert(var(i, p), ctx.neg(c));
                }
            }
            rows.push((row, ctx.zero()));
        }
    }
    // pi restricted to W is the identity: wb P = wb for each basis vector
    for wb in &wbasis {
        for j in 0..t {
            let mut row = SRow::new();
            for (i, c) in wb.iter().enumerate() {
                if !ctx.is_zero(c) {
                    row.insert(var(i, j), c.clone());
                }
            }
            rows.push((row, wb[j].clone()));
        }
    }
    Ok(solve(rows, t * t, ctx).is_some())
}

/// The endomorphism ring of the module, as an explicit matrix basis.
pub struct CommutantAlgebra {
    pub ctx: FieldContext,
    pub rep_dim: usize,
    pub basis: Vec<Mat>,
}

impl CommutantAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn commutant(r: &Representation) -> CommutantAlgebra {
    CommutantAlgebra {
        ctx: r.field().clone(),
        rep_dim: r.dim,
        basis: intertwiners(r, r),
    }
}

/// Radical by the Dickson trace-form criterion: x is radical iff
/// trace(x b) = 0 for every basis element b. Valid in characteristic 0 or
/// p > dim of the underlying representation.
pub fn radical_of_commutant(c: &CommutantAlgebra) -> Result<Vec<Mat>> {
    let ctx = &c.ctx;
    let ch = ctx.characteristic();
    if ch != 0 && ch as usize <= c.rep_dim {
        return Err(Error::BadCharacteristic(c.rep_dim));
    }
    let k = c.basis.len();
    // gram[i][j] = trace(b_i b_j)
    let mut rows = Vec::new();
    for i in 0..k {
        let mut row = SRow::new();
        for j in 0..k {
            let t = c.basis[j].mul(&c.basis[i], ctx).trace(ctx);
            if !ctx.is_zero(&t) {
                row.insert(j, t);
            }
        }
        rows.push(row);
    }
    let ns = null_space(rows, k, ctx);
    Ok(ns
        .into_iter()
        .map(|coeffs| {
            let mut m = Mat::zeros(c.rep_dim, c.rep_dim, ctx);
            for (&j, x) in &coeffs {
                m = m.add(&c.basis[j].scale(x, ctx), ctx);
            }
            m
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Indecomposable,
    /// A nontrivial equivariant idempotent splitting the module.
    Decomposable(Mat),
    Inconclusive {
        commutant_dim: usize,
        radical_dim: usize,
    },
}

/// Certify indecomposability through locality of the commutant: if
/// dim(C / rad C) = 1 the endomorphism ring is local and the module is
/// indecomposable. Otherwise look for an explicit nontrivial idempotent
/// among radical-complement candidates; failing both, report the dims.
pub fn indecomposability_certificate(r: &Representation) -> Result<Certificate> {
    let ctx = r.field();
    let c = commutant(r);
    let rad = radical_of_commutant(&c)?;
    if c.dim() == rad.len() + 1 {
        return Ok(Certificate::Indecomposable);
    }
    // complement representatives of rad inside C
    let mut ech = Echelon::new(ctx.clone());
    for m in &rad {
        ech.insert(m.to_srow(ctx));
    }
    let mut candidates: Vec<Mat> = Vec::new();
    for b in &c.basis {
        if ech.insert(b.to_srow(ctx)) {
            candidates.push(b.clone());
        }
    }
    let id = Mat::identity(r.dim, ctx);
    let mut sums: Vec<Mat> = Vec::new();
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            sums.push(candidates[i].add(&candidates[j], ctx));
        }
    }
    candidates.extend(sums);
    for m in &candidates {
        // idempotent up to scale: m^2 = c m with c invertible gives e = m/c
        let m2 = m.mul(m, ctx);
        let scal = (0..r.dim)
            .flat_map(|i| (0..r.dim).map(move |j| (i, j)))
            .find(|&(i, j)| !ctx.is_zero(m.at(i, j)))
            .map(|(i, j)| ctx.div(m2.at(i, j), m.at(i, j)));
        if let Some(Ok(cc)) = scal {
            if !ctx.is_zero(&cc) && m2 == m.scale(&cc, ctx) {
                let e = m.scale(&ctx.inv(&cc)?, ctx);
                if !e.is_zero(ctx) && e != id {
                    return Ok(Certificate::Decomposable(e));
                }
            }
        }
    }
    Ok(Certificate::Inconclusive {
        commutant_dim: c.dim(),
        radical_dim: rad.len(),
    })
}
