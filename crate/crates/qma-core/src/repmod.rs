//! Explicit module constructions: the simple and indecomposable families
//! over the rank-2 Dipper-Donkin algebra and the rank-2 reflection equation
//! algebra, as generator matrices under the right-module convention
//! (vectors are rows, a word acts by its matrices multiplied left to right).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ncalg::{dd2, rea2, NCPoly, Presentation, Word};
use crate::scalar::{format_scalar, parse_scalar, Backend, FieldContext, Scalar};
use crate::structure::rea_order;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    DdN1,
    DdN2,
    DdVerma,
    ReaN1,
    ReaN2,
    ReaN3,
    ReaVerma,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::DdN1 => "dd-n1",
            Family::DdN2 => "dd-n2",
            Family::DdVerma => "dd-verma",
            Family::ReaN1 => "rea-n1",
            Family::ReaN2 => "rea-n2",
            Family::ReaN3 => "rea-n3",
            Family::ReaVerma => "rea-verma",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "dd-n1" => Ok(Family::DdN1),
            "dd-n2" => Ok(Family::DdN2),
            "dd-verma" => Ok(Family::DdVerma),
            "rea-n1" => Ok(Family::ReaN1),
            "rea-n2" => Ok(Family::ReaN2),
            "rea-n3" => Ok(Family::ReaN3),
            "rea-verma" => Ok(Family::ReaVerma),
            _ => Err(Error::BadParams(format!("unknown family `{tag}`"))),
        }
    }

    pub fn is_dd(&self) -> bool {
        matches!(self, Family::DdN1 | Family::DdN2 | Family::DdVerma)
    }

    pub fn presentation(&self, field: FieldContext) -> Result<Presentation> {
        if self.is_dd() {
            dd2(field)
        } else {
            rea2(field)
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::DdN1 => &["alpha", "beta", "lambda1", "lambda2"],
            Family::DdN2 => &["beta", "gamma", "lambda2"],
            Family::DdVerma | Family::ReaVerma => &["lambda1", "lambda2"],
            Family::ReaN1 => &["beta", "lambda1", "lambda2", "lambda3"],
            Family::ReaN2 => &["alpha", "lambda1", "lambda2", "lambda3"],
            Family::ReaN3 => &["lambda1", "lambda2"],
        }
    }

    pub fn takes_p(&self) -> bool {
        matches!(self, Family::DdVerma | Family::ReaVerma)
    }
}

#[derive(Debug, Clone)]
pub struct DDN1Params {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub lambda1: Scalar,
    pub lambda2: Scalar,
}

#[derive(Debug, Clone)]
pub struct DDN2Params {
    pub beta: Scalar,
    pub gamma: Scalar,
    pub lambda2: Scalar,
}

#[derive(Debug, Clone)]
pub struct DDVermaParams {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub p: u64,
}

#[derive(Debug, Clone)]
pub struct REAN1Params {
    pub beta: Scalar,
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub lambda3: Scalar,
}

#[derive(Debug, Clone)]
pub struct REAN2Params {
    pub alpha: Scalar,
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub lambda3: Scalar,
}

#[derive(Debug, Clone)]
pub struct REAN3Params {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
}

#[derive(Debug, Clone)]
pub struct REAVermaParams {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub p: u64,
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub presentation: Presentation,
    pub dim: usize,
    /// One matrix per generator, indexed by generator id.
    pub action: Vec<Mat>,
    pub basis_labels: Vec<String>,
    pub family: Family,
    pub params: BTreeMap<String, Scalar>,
    pub p: Option<u64>,
    /// Induced scalars not among the input parameters (e.g. the u12^n
    /// eigenvalue on rea-n1).
    pub metadata: BTreeMap<String, Scalar>,
}

fn require_nonzero(ctx: &FieldContext, x: &Scalar, name: &str) -> Result<()> {
    if ctx.is_zero(x) {
        Err(Error::ZeroParameter(name.to_string()))
    } else {
        Ok(())
    }
}

impl Representation {
    pub fn field(&self) -> &FieldContext {
        self.presentation.field()
    }

    pub fn matrix_of_word(&self, w: &Word) -> Mat {
        let ctx = self.field();
        let mut m = Mat::identity(self.dim, ctx);
        for &g in &w.0 {
            m = m.mul(&self.action[g as usize], ctx);
        }
        m
    }

    pub fn matrix_of_poly(&self, x: &NCPoly) -> Mat {
        let ctx = self.field();
        let mut m = Mat::zeros(self.dim, self.dim, ctx);
        for (w, c) in &x.terms {
            m = m.add(&self.matrix_of_word(w).scale(c, ctx), ctx);
        }
        m
    }
}

/// Names of defining relations whose matrix identity fails; empty means the
/// representation is valid.
pub fn verify_relations(r: &Representation) -> Vec<String> {
    let ctx = r.field();
    let p = &r.presentation;
    let mut bad = Vec::new();
    for (&(a, b), rhs) in p.rules() {
        let lhs = r.action[a as usize].mul(&r.action[b as usize], ctx);
        let rhs_m = r.matrix_of_poly(rhs);
        if lhs != rhs_m {
            bad.push(format!("{}*{}", p.gen_name(a), p.gen_name(b)));
        }
    }
    bad
}

/// Apply a normalized or free polynomial to a row vector.
pub fn act(r: &Representation, x: &NCPoly, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let ctx = r.field();
    if v.len() != r.dim {
        return Err(Error::DimensionMismatch {
            expected: r.dim,
            got: v.len(),
        });
    }
    let mut out = vec![ctx.zero(); r.dim];
    for (w, c) in &x.terms {
        let mut u = v.to_vec();
        for &g in &w.0 {
            u = r.action[g as usize].act_on_row(&u, ctx)?;
        }
        for (o, x) in out.iter_mut().zip(&u) {
            *o = ctx.add(o, &ctx.mul(c, x));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// constructors

/// Simple dd module (N1, alpha, beta, lambda1, lambda2), dimension m^2,
/// basis e(a,b) = v Z11^a Z21^b in row-major (a, b) order.
pub fn dd_simple_n1(field: FieldContext, pr: &DDN1Params) -> Result<Representation> {
    let ctx = &field;
    for (x, n) in [
        (&pr.alpha, "alpha"),
        (&pr.beta, "beta"),
        (&pr.lambda1, "lambda1"),
        (&pr.lambda2, "lambda2"),
    ] {
        require_nonzero(ctx, x, n)?;
    }
    let m = ctx.m() as usize;
    let dim = m * m;
    let idx = |a: usize, b: usize| a * m + b;
    let mut z11 = Mat::zeros(dim, dim, ctx);
    let mut z12 = Mat::zeros(dim, dim, ctx);
    let mut z21 = Mat::zeros(dim, dim, ctx);
    let mut z22 = Mat::zeros(dim, dim, ctx);
    let alpha_inv = ctx.inv(&pr.alpha)?;
    let beta_inv = ctx.inv(&pr.beta)?;
    // lambda1 + q lambda2
    let l1_ql2 = ctx.add(&pr.lambda1, &ctx.mul(&ctx.q_pow(1), &pr.lambda2));
    for a in 0..m {
        for b in 0..m {
            let i = idx(a, b);
            let (ai, bi) = (a as i64, b as i64);
            // Z11
            if a < m - 1 {
                *z11.at_mut(i, idx(a + 1, b)) = ctx.q_pow(bi);
            } else {
                *z11.at_mut(i, idx(0, b)) = ctx.mul(&ctx.q_pow(bi), &pr.alpha);
            }
            // Z12
            if b > 0 {
                *z12.at_mut(i, idx(a, b - 1)) = ctx.mul(&ctx.q_pow(bi - ai), &pr.lambda2);
            } else {
                *z12.at_mut(i, idx(a, m - 1)) =
                    ctx.mul(&ctx.mul(&beta_inv, &pr.lambda2), &ctx.q_pow(-ai));
            }
            // Z21
            if b < m - 1 {
                *z21.at_mut(i, idx(a, b + 1)) = ctx.one();
            } else {
                *z21.at_mut(i, idx(a, 0)) = pr.beta.clone();
            }
            // Z22
            if a > 0 {
                // lambda1 + q lambda2 - q(1 - q^{-a}) lambda2
                let corr = ctx.mul(
                    &ctx.mul(&ctx.q_pow(1), &ctx.sub(&ctx.one(), &ctx.q_pow(-ai))),
                    &pr.lambda2,
                );
                *z22.at_mut(i, idx(a - 1, b)) = ctx.sub(&l1_ql2, &corr);
            } else {
                *z22.at_mut(i, idx(m - 1, b)) = ctx.mul(&alpha_inv, &l1_ql2);
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("alpha".into(), pr.alpha.clone());
    params.insert("beta".into(), pr.beta.clone());
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    Ok(Representation {
        presentation: dd2(field)?,
        dim,
        action: vec![z11, z12, z21, z22],
        basis_labels: (0..m)
            .flat_map(|a| (0..m).map(move |b| format!("e({a},{b})")))
            .collect(),
        family: Family::DdN1,
        params,
        p: None,
        metadata: BTreeMap::new(),
    })
}

/// Simple dd module (N2, beta, gamma, lambda2), dimension m^2, basis
/// e(a,b) = u Z22^a Z21^b. The auxiliary basis offset is fixed to 0; other
/// offsets only rescale lambda2 by a power of q, which the isomorphism
/// criterion absorbs.
pub fn dd_simple_n2(field: FieldContext, pr: &DDN2Params) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.beta, "beta")?;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    let m = ctx.m() as usize;
    let dim = m * m;
    let idx = |a: usize, b: usize| a * m + b;
    let mut z11 = Mat::zeros(dim, dim, ctx);
    let mut z12 = Mat::zeros(dim, dim, ctx);
    let mut z21 = Mat::zeros(dim, dim, ctx);
    let mut z22 = Mat::zeros(dim, dim, ctx);
    let beta_inv = ctx.inv(&pr.beta)?;
    for a in 0..m {
        for b in 0..m {
            let i = idx(a, b);
            let (ai, bi) = (a as i64, b as i64);
            // Z11: q^b (q^a - 1) lambda2 e(a-1, b); zero row at a = 0
            if a > 0 {
                let c = ctx.mul(
                    &ctx.mul(&ctx.q_pow(bi), &ctx.sub(&ctx.q_pow(ai), &ctx.one())),
                    &pr.lambda2,
                );
                *z11.at_mut(i, idx(a - 1, b)) = c;
            }
            // Z12
            if b > 0 {
                *z12.at_mut(i, idx(a, b - 1)) = ctx.mul(&ctx.q_pow(bi + ai), &pr.lambda2);
            } else {
                *z12.at_mut(i, idx(a, m - 1)) =
                    ctx.mul(&ctx.mul(&beta_inv, &ctx.q_pow(ai)), &pr.lambda2);
            }
            // Z21
            if b < m - 1 {
                *z21.at_mut(i, idx(a, b + 1)) = ctx.one();
            } else {
                *z21.at_mut(i, idx(a, 0)) = pr.beta.clone();
            }
            // Z22
            if a < m - 1 {
                *z22.at_mut(i, idx(a + 1, b)) = ctx.one();
            } else if !ctx.is_zero(&pr.gamma) {
                *z22.at_mut(i, idx(0, b)) = pr.gamma.clone();
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("beta".into(), pr.beta.clone());
    params.insert("gamma".into(), pr.gamma.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    Ok(Representation {
        presentation: dd2(field)?,
        dim,
        action: vec![z11, z12, z21, z22],
        basis_labels: (0..m)
            .flat_map(|a| (0..m).map(move |b| format!("e({a},{b})")))
            .collect(),
        family: Family::DdN2,
        params,
        p: None,
        metadata: BTreeMap::new(),
    })
}

/// Verma quotient Q_{p,m} over dd2: dimension p m^2, basis f(a,b) with
/// 0 <= a <= m-1, 0 <= b <= pm-1. The Z11 action at a = m-1 wraps with the
/// scalar lambda2, forced by v Z21^m = lambda2 v.
pub fn dd_verma_quotient(field: FieldContext, pr: &DDVermaParams) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.lambda1, "lambda1")?;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    if pr.p < 1 {
        return Err(Error::BadParams("p must be >= 1".into()));
    }
    let m = ctx.m() as usize;
    let pm = pr.p as usize * m;
    let dim = m * pm;
    let idx = |a: usize, b: usize| a * pm + b;
    let mut z11 = Mat::zeros(dim, dim, ctx);
    let mut z12 = Mat::zeros(dim, dim, ctx);
    let mut z21 = Mat::zeros(dim, dim, ctx);
    let mut z22 = Mat::zeros(dim, dim, ctx);
    for a in 0..m {
        for b in 0..pm {
            let i = idx(a, b);
            let (ai, bi) = (a as i64, b as i64);
            // Z11: lambda1 q^a (q^b - 1) f(a+1, b-1), a-index wraps with lambda2
            if b > 0 {
                let c = ctx.mul(
                    &ctx.mul(&pr.lambda1, &ctx.q_pow(ai)),
                    &ctx.sub(&ctx.q_pow(bi), &ctx.one()),
                );
                if a < m - 1 {
                    *z11.at_mut(i, idx(a + 1, b - 1)) = c;
                } else {
                    *z11.at_mut(i, idx(0, b - 1)) = ctx.mul(&pr.lambda2, &c);
                }
            }
            // Z12: diagonal
            *z12.at_mut(i, i) = ctx.mul(&ctx.q_pow(ai + bi), &pr.lambda1);
            // Z21
            if a < m - 1 {
                *z21.at_mut(i, idx(a + 1, b)) = ctx.one();
            } else {
                *z21.at_mut(i, idx(0, b)) = pr.lambda2.clone();
            }
            // Z22
            if b < pm - 1 {
                *z22.at_mut(i, idx(a, b + 1)) = ctx.one();
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    Ok(Representation {
        presentation: dd2(field)?,
        dim,
        action: vec![z11, z12, z21, z22],
        basis_labels: (0..m)
            .flat_map(|a| (0..pm).map(move |b| format!("f({a},{b})")))
            .collect(),
        family: Family::DdVerma,
        params,
        p: Some(pr.p),
        metadata: BTreeMap::new(),
    })
}

/// Simple REA module N1 of dimension n, basis w(r) = v u21^r.
pub fn rea_n1(field: FieldContext, pr: &REAN1Params) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.beta, "beta")?;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    let n = rea_order(ctx.m()) as usize;
    let mut u11 = Mat::zeros(n, n, ctx);
    let mut u12 = Mat::zeros(n, n, ctx);
    let mut u21 = Mat::zeros(n, n, ctx);
    let mut u22 = Mat::zeros(n, n, ctx);
    let beta_inv = ctx.inv(&pr.beta)?;
    for r in 0..n {
        let ri = r as i64;
        // u11: (lambda1 + q^-2 (1 - q^{2r}) lambda2) diagonal
        *u11.at_mut(r, r) = ctx.add(
            &pr.lambda1,
            &ctx.mul(
                &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.one(), &ctx.q_pow(2 * ri))),
                &pr.lambda2,
            ),
        );
        // u12: c_r w(r-1); wrap beta^-1 lambda3 w(n-1)
        if r >= 1 {
            // c_r = lambda3 + q^-2 (q^{2r}-1) lambda1 lambda2
            //       + (q^{2r} - q^{4r}) q^-4 lambda2^2
            let mut c = pr.lambda3.clone();
            c = ctx.add(
                &c,
                &ctx.mul(
                    &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.q_pow(2 * ri), &ctx.one())),
                    &ctx.mul(&pr.lambda1, &pr.lambda2),
                ),
            );
            c = ctx.add(
                &c,
                &ctx.mul(
                    &ctx.mul(
                        &ctx.sub(&ctx.q_pow(2 * ri), &ctx.q_pow(4 * ri)),
                        &ctx.q_pow(-4),
                    ),
                    &ctx.mul(&pr.lambda2, &pr.lambda2),
                ),
            );
            *u12.at_mut(r, r - 1) = c;
        } else {
            *u12.at_mut(0, n - 1) = ctx.mul(&beta_inv, &pr.lambda3);
        }
        // u21
        if r < n - 1 {
            *u21.at_mut(r, r + 1) = ctx.one();
        } else {
            *u21.at_mut(n - 1, 0) = pr.beta.clone();
        }
        // u22: q^{2r} lambda2 diagonal
        *u22.at_mut(r, r) = ctx.mul(&ctx.q_pow(2 * ri), &pr.lambda2);
    }
    let action = vec![u11, u12, u21, u22];
    // induced eigenvalue of the central u12^n, recorded as metadata
    let mut u12n = Mat::identity(n, ctx);
    for _ in 0..n {
        u12n = u12n.mul(&action[1], ctx);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("alpha".into(), u12n.at(0, 0).clone());
    let mut params = BTreeMap::new();
    params.insert("beta".into(), pr.beta.clone());
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    params.insert("lambda3".into(), pr.lambda3.clone());
    Ok(Representation {
        presentation: rea2(field)?,
        dim: n,
        action,
        basis_labels: (0..n).map(|r| format!("w({r})")).collect(),
        family: Family::ReaN1,
        params,
        p: None,
        metadata,
    })
}

/// Simple REA module N2 of dimension n, basis w(r) = v u12^r. The action
/// table is derived from the defining relations and certified by
/// verify_relations.
pub fn rea_n2(field: FieldContext, pr: &REAN2Params) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.alpha, "alpha")?;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    let n = rea_order(ctx.m()) as usize;
    let mut u11 = Mat::zeros(n, n, ctx);
    let mut u12 = Mat::zeros(n, n, ctx);
    let mut u21 = Mat::zeros(n, n, ctx);
    let mut u22 = Mat::zeros(n, n, ctx);
    let alpha_inv = ctx.inv(&pr.alpha)?;
    // mu_r: u11-eigenvalue of w(r)
    let mu = |r: i64| -> Scalar {
        ctx.add(
            &pr.lambda1,
            &ctx.mul(
                &ctx.mul(
                    &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.q_pow(2 * r), &ctx.one())),
                    &ctx.q_pow(-2 * r),
                ),
                &pr.lambda2,
            ),
        )
    };
    let l2_sq = ctx.mul(&pr.lambda2, &pr.lambda2);
    let qm2_minus_1 = ctx.sub(&ctx.q_pow(-2), &ctx.one());
    for r in 0..n {
        let ri = r as i64;
        *u11.at_mut(r, r) = mu(ri);
        *u22.at_mut(r, r) = ctx.mul(&ctx.q_pow(-2 * ri), &pr.lambda2);
        if r < n - 1 {
            *u12.at_mut(r, r + 1) = ctx.one();
        } else {
            *u12.at_mut(n - 1, 0) = pr.alpha.clone();
        }
    }
    // u21: d_r w(r-1) with d_1 = lambda3 and
    // d_r = d_{r-1} - (q^-2 - 1)(q^{-4(r-1)} lambda2^2 - mu_{r-1} q^{-2(r-1)} lambda2)
    let mut d = pr.lambda3.clone();
    for r in 1..n {
        let ri = r as i64;
        if r > 1 {
            let t = ctx.sub(
                &ctx.mul(&ctx.q_pow(-4 * (ri - 1)), &l2_sq),
                &ctx.mul(&mu(ri - 1), &ctx.mul(&ctx.q_pow(-2 * (ri - 1)), &pr.lambda2)),
            );
            d = ctx.sub(&d, &ctx.mul(&qm2_minus_1, &t));
        }
        *u21.at_mut(r, r - 1) = d.clone();
    }
    // wrap: w(0) u21 = alpha^-1 c1 w(n-1),
    // c1 = lambda3 + (q^-2 - 1)(lambda2^2 - lambda1 lambda2)
    let c1 = ctx.add(
        &pr.lambda3,
        &ctx.mul(
            &qm2_minus_1,
            &ctx.sub(&l2_sq, &ctx.mul(&pr.lambda1, &pr.lambda2)),
        ),
    );
    *u21.at_mut(0, n - 1) = ctx.mul(&alpha_inv, &c1);
    let mut params = BTreeMap::new();
    params.insert("alpha".into(), pr.alpha.clone());
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    params.insert("lambda3".into(), pr.lambda3.clone());
    Ok(Representation {
        presentation: rea2(field)?,
        dim: n,
        action: vec![u11, u12, u21, u22],
        basis_labels: (0..n).map(|r| format!("w({r})")).collect(),
        family: Family::ReaN2,
        params,
        p: None,
        metadata: BTreeMap::new(),
    })
}

/// Truncation length of the N3 family: smallest s in [1, n-1] with
/// lambda1 = q^{2s-2} lambda2, else n.
pub fn rea_n3_truncation(ctx: &FieldContext, lambda1: &Scalar, lambda2: &Scalar) -> usize {
    let n = rea_order(ctx.m()) as usize;
    for s in 1..n {
        let si = s as i64;
        if *lambda1 == ctx.mul(&ctx.q_pow(2 * si - 2), lambda2) {
            return s;
        }
    }
    n
}

/// Simple REA module N3 of dimension s, basis w(r) = w u21^r.
pub fn rea_n3(field: FieldContext, pr: &REAN3Params) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    let s = rea_n3_truncation(ctx, &pr.lambda1, &pr.lambda2);
    let mut u11 = Mat::zeros(s, s, ctx);
    let mut u12 = Mat::zeros(s, s, ctx);
    let mut u21 = Mat::zeros(s, s, ctx);
    let mut u22 = Mat::zeros(s, s, ctx);
    for r in 0..s {
        let ri = r as i64;
        *u11.at_mut(r, r) = ctx.add(
            &pr.lambda1,
            &ctx.mul(
                &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.one(), &ctx.q_pow(2 * ri))),
                &pr.lambda2,
            ),
        );
        *u22.at_mut(r, r) = ctx.mul(&ctx.q_pow(2 * ri), &pr.lambda2);
        if r >= 1 {
            // c_r = q^-2 (q^{2r}-1) lambda1 lambda2 + (q^{2r}-q^{4r}) q^-4 lambda2^2
            let c = ctx.add(
                &ctx.mul(
                    &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.q_pow(2 * ri), &ctx.one())),
                    &ctx.mul(&pr.lambda1, &pr.lambda2),
                ),
                &ctx.mul(
                    &ctx.mul(
                        &ctx.sub(&ctx.q_pow(2 * ri), &ctx.q_pow(4 * ri)),
                        &ctx.q_pow(-4),
                    ),
                    &ctx.mul(&pr.lambda2, &pr.lambda2),
                ),
            );
            *u12.at_mut(r, r - 1) = c;
        }
        if r < s - 1 {
            *u21.at_mut(r, r + 1) = ctx.one();
        }
    }
    let mut params = BTreeMap::new();
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    Ok(Representation {
        presentation: rea2(field)?,
        dim: s,
        action: vec![u11, u12, u21, u22],
        basis_labels: (0..s).map(|r| format!("w({r})")).collect(),
        family: Family::ReaN3,
        params,
        p: None,
        metadata: BTreeMap::new(),
    })
}

/// REA Verma quotient Q_{p,n}: dimension pn, basis f(r).
pub fn rea_verma_quotient(field: FieldContext, pr: &REAVermaParams) -> Result<Representation> {
    let ctx = &field;
    require_nonzero(ctx, &pr.lambda1, "lambda1")?;
    require_nonzero(ctx, &pr.lambda2, "lambda2")?;
    if pr.p < 1 {
        return Err(Error::BadParams("p must be >= 1".into()));
    }
    let n = rea_order(ctx.m()) as usize;
    let dim = pr.p as usize * n;
    let mut u11 = Mat::zeros(dim, dim, ctx);
    let mut u12 = Mat::zeros(dim, dim, ctx);
    let mut u21 = Mat::zeros(dim, dim, ctx);
    let mut u22 = Mat::zeros(dim, dim, ctx);
    for r in 0..dim {
        let ri = r as i64;
        *u11.at_mut(r, r) = ctx.add(
            &pr.lambda1,
            &ctx.mul(
                &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.one(), &ctx.q_pow(2 * ri))),
                &pr.lambda2,
            ),
        );
        *u22.at_mut(r, r) = ctx.mul(&ctx.q_pow(2 * ri), &pr.lambda2);
        if r >= 1 {
            let c = ctx.add(
                &ctx.mul(
                    &ctx.mul(&ctx.q_pow(-2), &ctx.sub(&ctx.q_pow(2 * ri), &ctx.one())),
                    &ctx.mul(&pr.lambda1, &pr.lambda2),
                ),
                &ctx.mul(
                    &ctx.mul(
                        &ctx.sub(&ctx.q_pow(2 * ri), &ctx.q_pow(4 * ri)),
                        &ctx.q_pow(-4),
                    ),
                    &ctx.mul(&pr.lambda2, &pr.lambda2),
                ),
            );
            *u12.at_mut(r, r - 1) = c;
        }
        if r < dim - 1 {
            *u21.at_mut(r, r + 1) = ctx.one();
        }
    }
    let mut params = BTreeMap::new();
    params.insert("lambda1".into(), pr.lambda1.clone());
    params.insert("lambda2".into(), pr.lambda2.clone());
    Ok(Representation {
        presentation: rea2(field)?,
        dim,
        action: vec![u11, u12, u21, u22],
        basis_labels: (0..dim).map(|r| format!("f({r})")).collect(),
        family: Family::ReaVerma,
        params,
        p: Some(pr.p),
        metadata: BTreeMap::new(),
    })
}

// ---------------------------------------------------------------------------
// intertwiners and isomorphism

/// Basis of { M : action1(g) . M = M . action2(g) for every generator g },
/// deterministic ordering from the canonical null-space basis.
pub fn intertwiners(r1: &Representation, r2: &Representation) -> Vec<Mat> {
    let ctx = r1.field();
    let (t1, t2) = (r1.dim, r2.dim);
    let var = |i: usize, j: usize| i * t2 + j;
    let mut rows = Vec::new();
    for g in 0..r1.action.len() {
        let a1 = &r1.action[g];
        let a2 = &r2.action[g];
        for i in 0..t1 {
            for j in 0..t2 {
                let mut row = crate::linalg::SRow::new();
                for k in 0..t1 {
                    let c = a1.at(i, k);
                    if !ctx.is_zero(c) {
                        let e = row.entry(var(k, j)).or_insert_with(|| ctx.zero());
                        *e = ctx.add(e, c);
                    }
                }
                for k in 0..t2 {
                    let c = a2.at(k, j);
                    if !ctx.is_zero(c) {
                        let e = row.entry(var(i, k)).or_insert_with(|| ctx.zero());
                        *e = ctx.sub(e, c);
                    }
                }
                row.retain(|_, v| !ctx.is_zero(v));
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    crate::linalg::null_space(rows, t1 * t2, ctx)
        .into_iter()
        .map(|s| Mat::from_srow(&s, t1, t2, ctx))
        .collect()
}

/// True iff some member of the intertwiner space is invertible. Basis
/// elements are tried first; then a deterministic coefficient grid of size
/// (t+1)^k, which is exhaustive for the degree-t determinant polynomial in
/// characteristic zero; over the prime backend it remains a sound (and for
/// the families built here, conclusive) search.
pub fn is_isomorphic(r1: &Representation, r2: &Representation) -> bool {
    find_invertible_intertwiner(r1, r2).is_some()
}

/// An invertible intertwiner exhibiting the isomorphism, if one exists.
pub fn find_invertible_intertwiner(r1: &Representation, r2: &Representation) -> Option<Mat> {
    if r1.dim != r2.dim || r1.presentation.name() != r2.presentation.name() {
        return None;
    }
    let ctx = r1.field();
    let basis = intertwiners(r1, r2);
    if basis.is_empty() {
        return None;
    }
    for b in &basis {
        if b.is_invertible(ctx) {
            return Some(b.clone());
        }
    }
    let k = basis.len();
    if k == 1 {
        return None; // scaling cannot create invertibility
    }
    let t = r1.dim;
    let mut combo = vec![0u64; k];
    loop {
        // odometer over {0..t}^k
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            combo[i] += 1;
            if combo[i] <= t as u64 {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
        let mut m = Mat::zeros(t, t, ctx);
        for (c, b) in combo.iter().zip(&basis) {
            if *c != 0 {
                m = m.add(&b.scale(&ctx.from_int(*c as i64), ctx), ctx);
            }
        }
        if m.is_invertible(ctx) {
            return Some(m);
        }
    }
}

/// The finite parameter-space isomorphism criteria for the dd families.
pub fn dd_iso_param_check(
    family: Family,
    a: &BTreeMap<String, Scalar>,
    b: &BTreeMap<String, Scalar>,
    ctx: &FieldContext,
) -> Result<bool> {
    let m = ctx.m() as i64;
    let get = |p: &BTreeMap<String, Scalar>, k: &str| -> Result<Scalar> {
        p.get(k)
            .cloned()
            .ok_or_else(|| Error::BadParams(format!("missing parameter `{k}`")))
    };
    match family {
        Family::DdN1 => {
            // alpha = alpha', beta = beta', lambda1 = q^b lambda1',
            // lambda2 = q^{b-a} lambda2'
            if get(a, "alpha")? != get(b, "alpha")? || get(a, "beta")? != get(b, "beta")? {
                return Ok(false);
            }
            let (l1, l2) = (get(a, "lambda1")?, get(a, "lambda2")?);
            let (l1p, l2p) = (get(b, "lambda1")?, get(b, "lambda2")?);
            for bb in 0..m {
                for aa in 0..m {
                    if l1 == ctx.mul(&ctx.q_pow(bb), &l1p)
                        && l2 == ctx.mul(&ctx.q_pow(bb - aa), &l2p)
                    {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        Family::DdN2 => {
            if get(a, "beta")? != get(b, "beta")? || get(a, "gamma")? != get(b, "gamma")? {
                return Ok(false);
            }
            let l2 = get(a, "lambda2")?;
            let l2p = get(b, "lambda2")?;
            for e in 0..(2 * m - 1) {
                if l2 == ctx.mul(&ctx.q_pow(e), &l2p) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Family::DdVerma => {
            if get(a, "lambda2")? != get(b, "lambda2")? {
                return Ok(false);
            }
            let l1 = get(a, "lambda1")?;
            let l1p = get(b, "lambda1")?;
            for e in 0..(2 * m - 1) {
                if l1 == ctx.mul(&ctx.q_pow(e), &l1p) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Err(Error::BadParams(
            "parameter criterion is stated only for the dd families".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// JSON interfaces

#[derive(Debug, Clone)]
pub struct ModuleParams {
    pub family: Family,
    pub m: u64,
    pub p: Option<u64>,
    pub params: BTreeMap<String, String>,
}

pub fn parse_module_params(text: &str) -> Result<ModuleParams> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::BadParams(format!("bad JSON: {e}")))?;
    let family = Family::parse(
        v.get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadParams("missing \"family\"".into()))?,
    )?;
    let m = v
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadParams("missing \"m\"".into()))?;
    let p = v.get("p").and_then(Value::as_u64);
    let mut params = BTreeMap::new();
    if let Some(obj) = v.get("params").and_then(Value::as_object) {
        for (k, val) in obj {
            let s = val
                .as_str()
                .ok_or_else(|| Error::BadParams(format!("parameter `{k}` must be a string")))?;
            params.insert(k.clone(), s.to_string());
        }
    }
    Ok(ModuleParams { family, m, p, params })
}

/// Build a representation from parsed parameters over the given field
/// context (whose order must match the file's m).
pub fn build_module(field: FieldContext, mp: &ModuleParams) -> Result<Representation> {
    if field.m() != mp.m {
        return Err(Error::BadParams(format!(
            "field has m={}, module file has m={}",
            field.m(),
            mp.m
        )));
    }
    let get = |k: &str| -> Result<Scalar> {
        let s = mp
            .params
            .get(k)
            .ok_or_else(|| Error::BadParams(format!("missing parameter `{k}`")))?;
        parse_scalar(s, &field)
    };
    let p = || -> Result<u64> {
        mp.p.ok_or_else(|| Error::BadParams("missing \"p\"".into()))
    };
    match mp.family {
        Family::DdN1 => dd_simple_n1(
            field.clone(),
            &DDN1Params {
                alpha: get("alpha")?,
                beta: get("beta")?,
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
            },
        ),
        Family::DdN2 => dd_simple_n2(
            field.clone(),
            &DDN2Params {
                beta: get("beta")?,
                gamma: get("gamma")?,
                lambda2: get("lambda2")?,
            },
        ),
        Family::DdVerma => dd_verma_quotient(
            field.clone(),
            &DDVermaParams {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                p: p()?,
            },
        ),
        Family::ReaN1 => rea_n1(
            field.clone(),
            &REAN1Params {
                beta: get("beta")?,
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda3: get("lambda3")?,
            },
        ),
        Family::ReaN2 => rea_n2(
            field.clone(),
            &REAN2Params {
                alpha: get("alpha")?,
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda3: get("lambda3")?,
            },
        ),
        Family::ReaN3 => rea_n3(
            field.clone(),
            &REAN3Params {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
            },
        ),
        Family::ReaVerma => rea_verma_quotient(
            field.clone(),
            &REAVermaParams {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                p: p()?,
            },
        ),
    }
}

pub fn representation_to_json(r: &Representation) -> Value {
    let ctx = r.field();
    let field = match ctx.backend() {
        Backend::CyclotomicRational => json!({ "backend": "cyclotomic", "m": ctx.m() }),
        Backend::PrimeField => json!({
            "backend": "prime",
            "m": ctx.m(),
            "p": ctx.prime_modulus().unwrap(),
        }),
    };
    let mut matrices = serde_json::Map::new();
    for (g, mat) in r.action.iter().enumerate() {
        let rows: Vec<Value> = (0..r.dim)
            .map(|i| {
                Value::Array(
                    (0..r.dim)
                        .map(|j| Value::String(format_scalar(mat.at(i, j), ctx)))
                        .collect(),
                )
            })
            .collect();
        matrices.insert(
            r.presentation.gen_name(g as u8).to_string(),
            Value::Array(rows),
        );
    }
    let params: serde_json::Map<String, Value> = r
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(format_scalar(v, ctx))))
        .collect();
    let metadata: serde_json::Map<String, Value> = r
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(format_scalar(v, ctx))))
        .collect();
    let mut out = json!({
        "family": r.family.tag(),
        "field": field,
        "dim": r.dim,
        "basis": r.basis_labels,
        "params": params,
        "matrices": matrices,
    });
    if let Some(p) = r.p {
        out["p"] = json!(p);
    }
    if !metadata.is_empty() {
        out["metadata"] = Value::Object(metadata);
    }
    out
}

/// Load an exported representation; matrices are taken as stored (not
/// rebuilt), so module-verify can detect corrupted files.
pub fn representation_from_json(text: &str) -> Result<Representation> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::BadParams(format!("bad JSON: {e}")))?;
    let family = Family::parse(
        v.get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadParams("missing \"family\"".into()))?,
    )?;
    let f = v
        .get("field")
        .ok_or_else(|| Error::BadParams("missing \"field\"".into()))?;
    let m = f
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadParams("missing field.m".into()))?;
    let ctx = match f.get("backend").and_then(Value::as_str) {
        Some("cyclotomic") | None => FieldContext::cyclotomic(m)?,
        Some("prime") => {
            let p = f
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::BadParams("missing field.p".into()))?;
            FieldContext::prime(m, p)?
        }
        Some(other) => return Err(Error::BadParams(format!("unknown backend `{other}`"))),
    };
    let presentation = family.presentation(ctx.clone())?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadParams("missing \"dim\"".into()))? as usize;
    let basis_labels: Vec<String> = v
        .get("basis")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(Value::as_str)
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_else(|| (0..dim).map(|i| format!("b({i})")).collect());
    let mats = v
        .get("matrices")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::BadParams("missing \"matrices\"".into()))?;
    let mut action = Vec::new();
    for g in 0..presentation.gen_count() {
        let name = presentation.gen_name(g as u8);
        let rows = mats
            .get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadParams(format!("missing matrix for `{name}`")))?;
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: rows.len(),
            });
        }
        let mut mat = Mat::zeros(dim, dim, &ctx);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::BadParams("matrix row must be an array".into()))?;
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            for (j, cell) in row.iter().enumerate() {
                let s = cell
                    .as_str()
                    .ok_or_else(|| Error::BadParams("matrix entry must be a string".into()))?;
                *mat.at_mut(i, j) = parse_scalar(s, &ctx)?;
            }
        }
        action.push(mat);
    }
    let mut params = BTreeMap::new();
    if let Some(obj) = v.get("params").and_then(Value::as_object) {
        for (k, val) in obj {
            if let Some(s) = val.as_str() {
                params.insert(k.clone(), parse_scalar(s, &ctx)?);
            }
        }
    }
    let mut metadata = BTreeMap::new();
    if let Some(obj) = v.get("metadata").and_then(Value::as_object) {
        for (k, val) in obj {
            if let Some(s) = val.as_str() {
                metadata.insert(k.clone(), parse_scalar(s, &ctx)?);
            }
        }
    }
    Ok(Representation {
        presentation,
        dim,
        action,
        basis_labels,
        family,
        params,
        p: v.get("p").and_then(Value::as_u64),
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::parse_poly;
    use crate::structure::{dd_detq, rea_trq};

    fn cyc(m: u64) -> FieldContext {
        FieldContext::cyclotomic(m).unwrap()
    }

    fn ones_n1(ctx: &FieldContext) -> DDN1Params {
        DDN1Params {
            alpha: ctx.one(),
            beta: ctx.one(),
            lambda1: ctx.one(),
            lambda2: ctx.one(),
        }
    }

    fn basis_vec(ctx: &FieldContext, dim: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![ctx.zero(); dim];
        v[i] = ctx.one();
        v
    }

    #[test]
    fn dd_n1_table_entries() {
        let ctx = cyc(2);
        let r = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        // e(0,1) Z11 = q e(1,1) = -e(1,1)
        let v = basis_vec(&ctx, 4, 1);
        let out = r.action[0].act_on_row(&v, &ctx).unwrap();
        assert_eq!(out, {
            let mut w = vec![ctx.zero(); 4];
            w[3] = ctx.from_int(-1);
            w
        });
        // e(1,0) Z11 = q^0 alpha e(0,0) = e(0,0)
        let v = basis_vec(&ctx, 4, 2);
        let out = r.action[0].act_on_row(&v, &ctx).unwrap();
        assert_eq!(out, basis_vec(&ctx, 4, 0));
    }

    #[test]
    fn dd_n1_z22_wrap_m3() {
        let ctx = cyc(3);
        let r = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        // e(0,0) Z22 = alpha^-1 (lambda1 + q lambda2) e(2,0) = (1+q) e(2,0)
        let v = basis_vec(&ctx, 9, 0);
        let out = r.action[3].act_on_row(&v, &ctx).unwrap();
        let mut expect = vec![ctx.zero(); 9];
        expect[6] = ctx.add(&ctx.one(), &ctx.q_pow(1));
        assert_eq!(out, expect);
    }

    #[test]
    fn dd_n2_table_entries() {
        let ctx = cyc(3);
        let r = dd_simple_n2(
            ctx.clone(),
            &DDN2Params {
                beta: ctx.one(),
                gamma: ctx.zero(),
                lambda2: ctx.one(),
            },
        )
        .unwrap();
        // e(0,b) Z11 = 0
        for b in 0..3 {
            let out = r.action[0].act_on_row(&basis_vec(&ctx, 9, b), &ctx).unwrap();
            assert!(out.iter().all(|x| ctx.is_zero(x)));
        }
        // e(2,0) Z22 = gamma e(0,0) = 0
        let out = r.action[3].act_on_row(&basis_vec(&ctx, 9, 6), &ctx).unwrap();
        assert!(out.iter().all(|x| ctx.is_zero(x)));
        // e(1,0) Z12 = q e(1,2)
        let out = r.action[1].act_on_row(&basis_vec(&ctx, 9, 3), &ctx).unwrap();
        let mut expect = vec![ctx.zero(); 9];
        expect[5] = ctx.q_pow(1);
        assert_eq!(out, expect);
    }

    #[test]
    fn dd_verma_entries() {
        let ctx = cyc(2);
        let r = dd_verma_quotient(
            ctx.clone(),
            &DDVermaParams {
                lambda1: ctx.one(),
                lambda2: ctx.one(),
                p: 2,
            },
        )
        .unwrap();
        assert_eq!(r.dim, 8);
        // f(a,0) Z11 = 0
        let out = r.action[0].act_on_row(&basis_vec(&ctx, 8, 0), &ctx).unwrap();
        assert!(out.iter().all(|x| ctx.is_zero(x)));
        // f(0,0) Z12 = lambda1 f(0,0)
        let out = r.action[1].act_on_row(&basis_vec(&ctx, 8, 0), &ctx).unwrap();
        assert_eq!(out, basis_vec(&ctx, 8, 0));
        // f(0, 2m-1) Z22 = 0
        let out = r.action[3].act_on_row(&basis_vec(&ctx, 8, 3), &ctx).unwrap();
        assert!(out.iter().all(|x| ctx.is_zero(x)));
    }

    #[test]
    fn all_families_satisfy_relations() {
        for m in 2..=6u64 {
            let ctx = cyc(m);
            let q = ctx.q();
            let reps: Vec<Representation> = vec![
                dd_simple_n1(
                    ctx.clone(),
                    &DDN1Params {
                        alpha: q.clone(),
                        beta: ctx.from_int(2),
                        lambda1: ctx.one(),
                        lambda2: ctx.mul(&q, &ctx.from_int(3)),
                    },
                )
                .unwrap(),
                dd_simple_n2(
                    ctx.clone(),
                    &DDN2Params {
                        beta: ctx.from_int(3),
                        gamma: q.clone(),
                        lambda2: ctx.from_int(2),
                    },
                )
                .unwrap(),
                dd_verma_quotient(
                    ctx.clone(),
                    &DDVermaParams {
                        lambda1: q.clone(),
                        lambda2: ctx.from_int(2),
                        p: 2,
                    },
                )
                .unwrap(),
                rea_n1(
                    ctx.clone(),
                    &REAN1Params {
                        beta: ctx.from_int(2),
                        lambda1: q.clone(),
                        lambda2: ctx.from_int(3),
                        lambda3: ctx.one(),
                    },
                )
                .unwrap(),
                rea_n2(
                    ctx.clone(),
                    &REAN2Params {
                        alpha: ctx.from_int(2),
                        lambda1: ctx.one(),
                        lambda2: q.clone(),
                        lambda3: ctx.from_int(2),
                    },
                )
                .unwrap(),
                rea_n3(
                    ctx.clone(),
                    &REAN3Params {
                        lambda1: ctx.from_int(3),
                        lambda2: ctx.one(),
                    },
                )
                .unwrap(),
                rea_verma_quotient(
                    ctx.clone(),
                    &REAVermaParams {
                        lambda1: ctx.from_int(2),
                        lambda2: q.clone(),
                        p: 2,
                    },
                )
                .unwrap(),
            ];
            for r in &reps {
                assert_eq!(
                    verify_relations(r),
                    Vec::<String>::new(),
                    "family {} at m={m}",
                    r.family.tag()
                );
            }
        }
    }

    #[test]
    fn corrupted_matrix_fails_verification() {
        let ctx = cyc(3);
        let mut r = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        let x = r.action[0].at(0, 0).clone();
        *r.action[0].at_mut(0, 0) = ctx.add(&x, &ctx.one());
        assert!(!verify_relations(&r).is_empty());
    }

    #[test]
    fn detq_eigenvalue_on_n1() {
        let ctx = cyc(3);
        let r = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        let detq = dd_detq(&r.presentation);
        let out = act(&r, &detq, &basis_vec(&ctx, 9, 0)).unwrap();
        assert_eq!(out, basis_vec(&ctx, 9, 0)); // lambda1 = 1
        // diagonal entries q^b lambda1 at e(a,b)
        let dm = r.matrix_of_poly(&detq);
        for a in 0..3usize {
            for b in 0..3usize {
                assert_eq!(*dm.at(a * 3 + b, a * 3 + b), ctx.q_pow(b as i64));
            }
        }
        // Z12 Z21 diagonal q^{b-a} lambda2
        let z12z21 = parse_poly("Z12*Z21", &r.presentation).unwrap();
        let zm = r.matrix_of_poly(&z12z21);
        for a in 0..3usize {
            for b in 0..3usize {
                assert_eq!(
                    *zm.at(a * 3 + b, a * 3 + b),
                    ctx.q_pow(b as i64 - a as i64)
                );
            }
        }
    }

    #[test]
    fn trq_is_scalar_on_rea_families() {
        for m in [3u64, 4, 5] {
            let ctx = cyc(m);
            let r = rea_n1(
                ctx.clone(),
                &REAN1Params {
                    beta: ctx.one(),
                    lambda1: ctx.from_int(2),
                    lambda2: ctx.from_int(3),
                    lambda3: ctx.one(),
                },
            )
            .unwrap();
            let trq = rea_trq(&r.presentation);
            let tm = r.matrix_of_poly(&trq);
            let expect = ctx.add(&ctx.from_int(2), &ctx.mul(&ctx.q_pow(-2), &ctx.from_int(3)));
            assert_eq!(tm, Mat::identity(r.dim, &ctx).scale(&expect, &ctx));
        }
    }

    #[test]
    fn rea_n3_truncation_lengths() {
        let ctx = cyc(5);
        let one = ctx.one();
        assert_eq!(rea_n3_truncation(&ctx, &one, &one), 1);
        let l1 = ctx.q_pow(2);
        assert_eq!(rea_n3_truncation(&ctx, &l1, &one), 2);
        let l1 = ctx.from_int(3);
        assert_eq!(rea_n3_truncation(&ctx, &l1, &one), 5);
    }

    #[test]
    fn rea_n1_u12_wrap_zero() {
        let ctx = cyc(6); // n = 3
        let r = rea_n1(
            ctx.clone(),
            &REAN1Params {
                beta: ctx.one(),
                lambda1: ctx.zero(),
                lambda2: ctx.one(),
                lambda3: ctx.zero(),
            },
        )
        .unwrap();
        assert_eq!(r.dim, 3);
        let out = r.action[1].act_on_row(&basis_vec(&ctx, 3, 0), &ctx).unwrap();
        assert!(out.iter().all(|x| ctx.is_zero(x)));
    }

    #[test]
    fn schur_and_conjugate_intertwiners() {
        let ctx = cyc(2);
        let r = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        let basis = intertwiners(&r, &r);
        assert_eq!(basis.len(), 1);

        // conjugated copy: B = P^-1 A P for a permutation P; the intertwiner
        // space R -> conjugate is spanned by P
        let mut p = Mat::zeros(4, 4, &ctx);
        let perm = [2usize, 0, 3, 1];
        for (i, &j) in perm.iter().enumerate() {
            *p.at_mut(i, j) = ctx.one();
        }
        let mut pinv = Mat::zeros(4, 4, &ctx);
        for (i, &j) in perm.iter().enumerate() {
            *pinv.at_mut(j, i) = ctx.one();
        }
        let mut r2 = r.clone();
        for mat in r2.action.iter_mut() {
            *mat = pinv.mul(&mat.mul(&p, &ctx), &ctx);
        }
        assert_eq!(verify_relations(&r2), Vec::<String>::new());
        let basis = intertwiners(&r, &r2);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_invertible(&ctx));
        assert!(is_isomorphic(&r, &r2));
    }

    #[test]
    fn n1_parameter_shift_isomorphism() {
        let ctx = cyc(3);
        let q = ctx.q();
        let r1 = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        let r2 = dd_simple_n1(
            ctx.clone(),
            &DDN1Params {
                alpha: ctx.one(),
                beta: ctx.one(),
                lambda1: q.clone(),
                lambda2: q.clone(),
            },
        )
        .unwrap();
        assert!(is_isomorphic(&r1, &r2));
        assert!(dd_iso_param_check(Family::DdN1, &r1.params, &r2.params, &ctx).unwrap());
        // alpha differs -> not isomorphic
        let r3 = dd_simple_n1(
            ctx.clone(),
            &DDN1Params {
                alpha: q.clone(),
                beta: ctx.one(),
                lambda1: ctx.one(),
                lambda2: ctx.one(),
            },
        )
        .unwrap();
        assert!(intertwiners(&r1, &r3).is_empty());
        assert!(!is_isomorphic(&r1, &r3));
        assert!(!dd_iso_param_check(Family::DdN1, &r1.params, &r3.params, &ctx).unwrap());
    }

    #[test]
    fn n1_n2_never_isomorphic() {
        let ctx = cyc(2);
        let r1 = dd_simple_n1(ctx.clone(), &ones_n1(&ctx)).unwrap();
        let r2 = dd_simple_n2(
            ctx.clone(),
            &DDN2Params {
                beta: ctx.one(),
                gamma: ctx.zero(),
                lambda2: ctx.one(),
            },
        )
        .unwrap();
        assert!(!is_isomorphic(&r1, &r2));
        // separation: Z11 null space 0 on N1, dimension m on N2
        assert_eq!(r1.action[0].rank(&ctx), r1.dim);
        assert_eq!(r2.action[0].rank(&ctx), r2.dim - 2);
    }

    #[test]
    fn json_roundtrip() {
        let ctx = cyc(3);
        let r = rea_n1(
            ctx.clone(),
            &REAN1Params {
                beta: ctx.from_int(2),
                lambda1: ctx.one(),
                lambda2: ctx.q_pow(1),
                lambda3: ctx.zero(),
            },
        )
        .unwrap();
        let j = representation_to_json(&r).to_string();
        let r2 = representation_from_json(&j).unwrap();
        assert_eq!(r2.dim, r.dim);
        assert_eq!(r2.action, r.action);
        assert_eq!(r2.params, r.params);
        assert_eq!(r2.basis_labels, r.basis_labels);
        assert_eq!(verify_relations(&r2), Vec::<String>::new());
    }

    #[test]
    fn param_file_build() {
        let text = r#"{
            "family": "dd-verma", "m": 2, "p": 2,
            "params": {"lambda1": "1", "lambda2": "q"}
        }"#;
        let mp = parse_module_params(text).unwrap();
        let ctx = cyc(2);
        let r = build_module(ctx, &mp).unwrap();
        assert_eq!(r.dim, 8);
        assert_eq!(verify_relations(&r), Vec::<String>::new());
    }

    #[test]
    fn zero_parameter_rejected() {
        let ctx = cyc(3);
        let bad = DDN1Params {
            alpha: ctx.zero(),
            beta: ctx.one(),
            lambda1: ctx.one(),
            lambda2: ctx.one(),
        };
        assert!(matches!(
            dd_simple_n1(ctx.clone(), &bad),
            Err(Error::ZeroParameter(_))
        ));
    }
}
