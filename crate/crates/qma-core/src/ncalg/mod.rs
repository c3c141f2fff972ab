//! Words, noncommutative polynomials and algebra presentations with oriented
//! rewrite rules toward a PBW-ordered normal form.
//!
//! Every rule rewrites a two-letter subword. For the Ore-type rules the left
//! side is a descending pair `X_j X_i` (j > i in the generator order) and the
//! right side is `c * X_i X_j + correction`; quotient presentations may add a
//! rule for a forbidden ascending pair (the quantum determinant rule).

mod parse;

pub use parse::{parse_poly, parse_presentation};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{FieldContext, Scalar};

pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

/// A word in the generators; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: u8) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(g: u8, e: usize) -> Word {
        Word(vec![g; e])
    }
}

/// Words are ordered by (length, lexicographic); this is the term order used
/// for deterministic iteration and for picking the largest word to rewrite.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finitely supported scalar combination of words. No explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    pub terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &FieldContext) -> Self {
        Self::term(Word::one(), ctx.one(), ctx)
    }

    pub fn term(w: Word, c: Scalar, ctx: &FieldContext) -> Self {
        let mut terms = BTreeMap::new();
        if !ctx.is_zero(&c) {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn generator(g: u8, ctx: &FieldContext) -> Self {
        Self::term(Word::single(g), ctx.one(), ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar, ctx: &FieldContext) {
        if ctx.is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(e.get(), &c);
                if ctx.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &NCPoly, ctx: &FieldContext) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone(), ctx);
        }
        out
    }

    pub fn sub(&self, other: &NCPoly, ctx: &FieldContext) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), ctx.neg(c), ctx);
        }
        out
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldContext) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), ctx.mul(x, c), ctx);
        }
        out
    }

    /// Free (unnormalized) product.
    pub fn mul_free(&self, other: &NCPoly, ctx: &FieldContext) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wx, cx) in &self.terms {
            for (wy, cy) in &other.terms {
                out.add_term(wx.concat(wy), ctx.mul(cx, cy), ctx);
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

/// An ordered-generator presentation with oriented two-letter rewrite rules.
#[derive(Debug, Clone)]
pub struct Presentation {
    field: FieldContext,
    names: Vec<String>,
    display_name: String,
    rules: BTreeMap<(u8, u8), NCPoly>,
    pub step_cap: u64,
}

impl Presentation {
    /// Build a presentation from raw rules; rule right sides are brought to
    /// normal form with respect to the full rule set at load time.
    pub fn new(
        field: FieldContext,
        names: Vec<String>,
        rules: Vec<((u8, u8), NCPoly)>,
        display_name: impl Into<String>,
    ) -> Result<Self> {
        let g = names.len();
        if g > u8::MAX as usize {
            return Err(Error::BadParams("too many generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::BadParams(format!("duplicate generator `{n}`")));
            }
        }
        let mut map = BTreeMap::new();
        for ((a, b), rhs) in rules {
            if a as usize >= g || b as usize >= g {
                return Err(Error::BadParams("rule references unknown generator".into()));
            }
            if map.insert((a, b), rhs).is_some() {
                return Err(Error::BadParams(format!(
                    "duplicate rule for `{}*{}`",
                    names[a as usize], names[b as usize]
                )));
            }
        }
        let mut p = Presentation {
            field,
            names,
            display_name: display_name.into(),
            rules: map,
            step_cap: DEFAULT_STEP_CAP,
        };
        p.renormalize_rules()?;
        Ok(p)
    }

    fn renormalize_rules(&mut self) -> Result<()> {
        // fixpoint over passes: each rhs must be normal w.r.t. the full set
        loop {
            let mut changed = false;
            let keys: Vec<(u8, u8)> = self.rules.keys().copied().collect();
            for key in keys {
                let rhs = self.rules[&key].clone();
                let norm = self.normalize(&rhs)?;
                if norm != rhs {
                    self.rules.insert(key, norm);
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.display_name
    }

    pub fn gen_count(&self) -> usize {
        self.names.len()
    }

    pub fn gen_name(&self, g: u8) -> &str {
        &self.names[g as usize]
    }

    pub fn gen_names(&self) -> &[String] {
        &self.names
    }

    pub fn gen_index(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn rules(&self) -> &BTreeMap<(u8, u8), NCPoly> {
        &self.rules
    }

    fn first_reducible_pos(&self, w: &Word) -> Option<usize> {
        w.0.windows(2)
            .position(|p| self.rules.contains_key(&(p[0], p[1])))
    }

    /// Bring a polynomial to normal form: repeatedly rewrite the leftmost
    /// reducible subword of the largest word, until no rule applies.
    pub fn normalize(&self, x: &NCPoly) -> Result<NCPoly> {
        let ctx = &self.field;
        let mut normal = NCPoly::zero();
        let mut pending: BTreeMap<Word, Scalar> = x.terms.clone();
        let mut steps: u64 = 0;
        while let Some((w, c)) = pending.pop_last() {
            match self.first_reducible_pos(&w) {
                None => normal.add_term(w, c, ctx),
                Some(i) => {
                    steps += 1;
                    if steps > self.step_cap {
                        return Err(Error::StepCapExceeded(self.step_cap));
                    }
                    let rhs = &self.rules[&(w.0[i], w.0[i + 1])];
                    for (t, tc) in &rhs.terms {
                        let mut nw = Vec::with_capacity(w.len() - 2 + t.len());
                        nw.extend_from_slice(&w.0[..i]);
                        nw.extend_from_slice(&t.0);
                        nw.extend_from_slice(&w.0[i + 2..]);
                        let coeff = ctx.mul(&c, tc);
                        if ctx.is_zero(&coeff) {
                            continue;
                        }
                        let nw = Word(nw);
                        // merge into pending (or straight to normal if known normal
                        // words collide we still route through pending for one pass)
                        match pending.entry(nw) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(coeff);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let s = ctx.add(e.get(), &coeff);
                                if ctx.is_zero(&s) {
                                    e.remove();
                                } else {
                                    e.insert(s);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(normal)
    }

    pub fn normalize_word(&self, w: Word) -> Result<NCPoly> {
        self.normalize(&NCPoly::term(w, self.field.one(), &self.field))
    }

    /// Normalized product.
    pub fn mul(&self, x: &NCPoly, y: &NCPoly) -> Result<NCPoly> {
        self.normalize(&x.mul_free(y, &self.field))
    }

    pub fn pow(&self, x: &NCPoly, e: usize) -> Result<NCPoly> {
        let mut acc = NCPoly::one(&self.field);
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Diamond-lemma local confluence check: every length-3 overlap of two
    /// rule left sides must reduce to the same normal form both ways.
    pub fn check_confluence(&self) -> Result<Vec<Word>> {
        let mut bad = Vec::new();
        for (&(a, b), rhs_ab) in &self.rules {
            for (&(b2, c), rhs_bc) in &self.rules {
                if b != b2 {
                    continue;
                }
                // overlap word a b c
                let left = self.normalize(
                    &rhs_ab.mul_free(&NCPoly::generator(c, &self.field), &self.field),
                )?;
                let right = self.normalize(
                    &NCPoly::generator(a, &self.field).mul_free(rhs_bc, &self.field),
                )?;
                if left != right {
                    bad.push(Word(vec![a, b, c]));
                }
            }
        }
        Ok(bad)
    }

    /// Quotient by the two-sided ideal generated by one generator.
    pub fn quotient_kill_generator(&self, g: u8) -> Result<Presentation> {
        if g as usize >= self.names.len() {
            return Err(Error::UnknownGenerator(format!("index {g}")));
        }
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != g as usize)
            .map(|(_, n)| n.clone())
            .collect();
        let remap = |old: u8| -> Option<u8> {
            if old == g {
                None
            } else if old > g {
                Some(old - 1)
            } else {
                Some(old)
            }
        };
        let mut rules = Vec::new();
        for (&(a, b), rhs) in &self.rules {
            let (Some(na), Some(nb)) = (remap(a), remap(b)) else {
                continue;
            };
            let mut new_rhs = NCPoly::zero();
            'term: for (w, c) in &rhs.terms {
                let mut nw = Vec::with_capacity(w.len());
                for &l in &w.0 {
                    match remap(l) {
                        None => continue 'term,
                        Some(nl) => nw.push(nl),
                    }
                }
                new_rhs.add_term(Word(nw), c.clone(), &self.field);
            }
            rules.push(((na, nb), new_rhs));
        }
        let mut p = Presentation::new(
            self.field.clone(),
            names,
            rules,
            format!("{}/{}", self.display_name, self.gen_name(g)),
        )?;
        p.step_cap = self.step_cap;
        Ok(p)
    }

    /// Quotient of the Dipper-Donkin rank-2 algebra by the quantum
    /// determinant: adds the rule `Z11*Z22 -> Z12*Z21` and renormalizes.
    pub fn quotient_by_detq(&self) -> Result<Presentation> {
        let z11 = self
            .gen_index("Z11")
            .ok_or_else(|| Error::BadParams("detq quotient needs the dd2 presentation".into()))?;
        let z12 = self.gen_index("Z12").unwrap();
        let z21 = self.gen_index("Z21").unwrap();
        let z22 = self.gen_index("Z22").unwrap();
        let mut rules: Vec<((u8, u8), NCPoly)> = self
            .rules
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        rules.push((
            (z11, z22),
            NCPoly::term(Word(vec![z12, z21]), self.field.one(), &self.field),
        ));
        let mut p = Presentation::new(
            self.field.clone(),
            self.names.clone(),
            rules,
            format!("{}/detq", self.display_name),
        )?;
        p.step_cap = self.step_cap;
        Ok(p)
    }

    pub fn format_poly(&self, x: &NCPoly) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let ctx = &self.field;
        let mut out = String::new();
        for (w, c) in &x.terms {
            let cs = crate::scalar::format_scalar(c, ctx);
            let (sign, mag) = if let Some(stripped) = cs.strip_prefix('-') {
                if stripped.contains(" + ") || stripped.contains(" - ") {
                    ("+", format!("({cs})"))
                } else {
                    ("-", stripped.to_string())
                }
            } else if cs.contains(" + ") || cs.contains(" - ") {
                ("+", format!("({cs})"))
            } else {
                ("+", cs)
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let word_str = self.format_word(w);
            if w.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&word_str);
            } else {
                out.push_str(&mag);
                out.push(' ');
                out.push_str(&word_str);
            }
        }
        out
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let g = w.0[i];
            let mut e = 1;
            while i + e < w.len() && w.0[i + e] == g {
                e += 1;
            }
            if e == 1 {
                parts.push(self.gen_name(g).to_string());
            } else {
                parts.push(format!("{}^{}", self.gen_name(g), e));
            }
            i += e;
        }
        parts.join("*")
    }
}

// ---------------------------------------------------------------------------
// built-in presentations

/// Dipper-Donkin quantized matrix algebra of rank n, generators `Zij` in
/// lexicographic order of (i, j).
pub fn dd(n: usize, field: FieldContext) -> Result<Presentation> {
    if n < 1 {
        return Err(Error::BadParams("dd(n) needs n >= 1".into()));
    }
    if n * n > u8::MAX as usize {
        return Err(Error::BadParams("dd(n) rank too large".into()));
    }
    let idx = |i: usize, j: usize| -> u8 { ((i - 1) * n + (j - 1)) as u8 };
    let mut names = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            names.push(format!("Z{i}{j}"));
        }
    }
    let q = field.q();
    let q_minus_1 = field.sub(&q, &field.one());
    let mut rules = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for s in 1..=n {
                for t in 1..=n {
                    if (i, j) <= (s, t) {
                        continue;
                    }
                    // Z_ij Z_st with (i,j) > (s,t): orient toward Z_st Z_ij
                    let lhs = (idx(i, j), idx(s, t));
                    let swap = Word(vec![idx(s, t), idx(i, j)]);
                    let rhs = if i == s {
                        NCPoly::term(swap, field.one(), &field)
                    } else if j <= t {
                        NCPoly::term(swap, q.clone(), &field)
                    } else {
                        let mut r = NCPoly::term(swap, field.one(), &field);
                        r.add_term(
                            Word(vec![idx(s, j), idx(i, t)]),
                            q_minus_1.clone(),
                            &field,
                        );
                        r
                    };
                    rules.push((lhs, rhs));
                }
            }
        }
    }
    Presentation::new(field, names, rules, format!("dd{n}"))
}

/// The rank-2 Dipper-Donkin algebra.
pub fn dd2(field: FieldContext) -> Result<Presentation> {
    dd(2, field)
}

/// The rank-2 reflection equation algebra, generators u11 < u12 < u21 < u22.
pub fn rea2(field: FieldContext) -> Result<Presentation> {
    let names = vec!["u11".into(), "u12".into(), "u21".into(), "u22".into()];
    let (u11, u12, u21, u22) = (0u8, 1u8, 2u8, 3u8);
    let one = field.one();
    let qm2_minus_1 = field.sub(&field.q_pow(-2), &one);
    let mut rules: Vec<((u8, u8), NCPoly)> = Vec::new();

    // u12*u11 -> u11*u12 - (q^-2 - 1) u12*u22
    let mut r = NCPoly::term(Word(vec![u11, u12]), one.clone(), &field);
    r.add_term(Word(vec![u12, u22]), field.neg(&qm2_minus_1), &field);
    rules.push(((u12, u11), r));

    // u21*u11 -> u11*u21 + q^-2 (q^-2 - 1) u21*u22
    let mut r = NCPoly::term(Word(vec![u11, u21]), one.clone(), &field);
    r.add_term(
        Word(vec![u21, u22]),
        field.mul(&field.q_pow(-2), &qm2_minus_1),
        &field,
    );
    rules.push(((u21, u11), r));

    // u21*u12 -> u12*u21 + (q^-2 - 1) u22^2 - (q^-2 - 1) u11*u22
    let mut r = NCPoly::term(Word(vec![u12, u21]), one.clone(), &field);
    r.add_term(Word(vec![u22, u22]), qm2_minus_1.clone(), &field);
    r.add_term(Word(vec![u11, u22]), field.neg(&qm2_minus_1), &field);
    rules.push(((u21, u12), r));

    // u22*u11 -> u11*u22
    rules.push((
        (u22, u11),
        NCPoly::term(Word(vec![u11, u22]), one.clone(), &field),
    ));
    // u22*u12 -> q^2 u12*u22
    rules.push((
        (u22, u12),
        NCPoly::term(Word(vec![u12, u22]), field.q_pow(2), &field),
    ));
    // u22*u21 -> q^-2 u21*u22
    rules.push((
        (u22, u21),
        NCPoly::term(Word(vec![u21, u22]), field.q_pow(-2), &field),
    ));

    Presentation::new(field, names, rules, "rea2")
}

/// Quantum affine space with integer exponent matrix H: `x_i x_j = q^{h_ij} x_j x_i`.
pub fn qaffine(h: &[Vec<i64>], field: FieldContext) -> Result<Presentation> {
    let n = h.len();
    if n == 0 || h.iter().any(|row| row.len() != n) {
        return Err(Error::BadParams("exponent matrix must be square".into()));
    }
    for i in 0..n {
        if h[i][i] != 0 {
            return Err(Error::BadParams("exponent matrix must have zero diagonal".into()));
        }
        for j in 0..n {
            if h[i][j] != -h[j][i] {
                return Err(Error::BadParams("exponent matrix must be antisymmetric".into()));
            }
        }
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut rules = Vec::new();
    for j in 0..n {
        for i in 0..j {
            // x_{j+1} x_{i+1} = q^{h_{ji}} x_{i+1} x_{j+1}
            rules.push((
                (j as u8, i as u8),
                NCPoly::term(Word(vec![i as u8, j as u8]), field.q_pow(h[j][i]), &field),
            ));
        }
    }
    Presentation::new(field, names, rules, format!("qaffine{n}"))
}
