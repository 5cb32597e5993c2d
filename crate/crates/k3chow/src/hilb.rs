//! Formal Chern-character algebra on `X^[n] x X^k x X^l` and the recursive
//! zero-decision procedure for tautological product classes.
//!
//! A [`HilbExpr`] is a sum of terms `monomial in ch_i(I_n^(t)) x decorated
//! partition`, where `I_n` is the universal ideal sheaf and `t` ranges over
//! the X-factors. The rank-zero normalization `I-bar_n` is resolved at
//! construction: `ch_i` of the normalized sheaf equals `ch_i(I_n)` except in
//! degree 2, where `n·c_X` on the paired factor is added, and in degree 0,
//! where it vanishes.
//!
//! Deciding whether an expression vanishes descends through the nested
//! Hilbert scheme: pulling back to it turns level-`n+1` generators into
//! level-`n` generators, diagonal classes against a fresh X-factor, and
//! powers of the hyperplane class of the projectivized ideal sheaf;
//! pushing forward converts hyperplane powers into Chern classes of `-I_n`.
//! An expression at level `n+1` vanishes iff both the plain pushforward and
//! the pushforward after one extra hyperplane factor vanish, so the
//! procedure is sound and terminates in the surface calculus at level 1.

use crate::newton::{chern_from_character, CommRing};
use crate::partition::{Dec, Part};
use crate::rational::{factorial, q, Q};
use crate::surface::SurfaceModel;
use crate::taut::{self, TautClass};
use crate::Error;
use num::traits::Zero;
use smallvec::{smallvec, SmallVec};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

/// An X-factor of the ambient product. Auxiliary factors come first in the
/// position roster, ordered by index; fresh factors created by the recursion
/// get indices 0, -1, -2, ... so each newcomer is the lowest-index auxiliary
/// factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XFactor {
    Aux(i32),
    Main(u32),
}

impl fmt::Display for XFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XFactor::Aux(i) => write!(f, "a{i}"),
            XFactor::Main(t) => write!(f, "x{t}"),
        }
    }
}

/// One Chern-character generator `ch_degree(I_level^(factor))`, with the
/// normalization flag resolved by the constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChGen {
    pub factor: XFactor,
    pub degree: u8,
}

/// Monomial in generators: sorted `(generator, exponent)` pairs.
type ChMono = SmallVec<[(ChGen, u8); 4]>;

fn mono_mul(a: &ChMono, b: &ChMono) -> ChMono {
    let mut out = a.clone();
    for &(g, e) in b {
        match out.iter_mut().find(|(h, _)| *h == g) {
            Some((_, oe)) => *oe += e,
            None => out.push((g, e)),
        }
    }
    out.sort_by_key(|&(g, _)| (g.factor, g.degree));
    out
}

fn mono_codim(m: &ChMono) -> usize {
    m.iter()
        .map(|&(g, e)| g.degree as usize * e as usize)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct HTerm {
    gens: ChMono,
    part: Part,
}

/// A tautological class on `X^[level] x X^aux x X^mains` in the formal
/// generator algebra.
#[derive(Clone)]
pub struct HilbExpr {
    model: Arc<SurfaceModel>,
    level: u32,
    aux: Vec<i32>,
    mains: u32,
    terms: HashMap<HTerm, Q>,
}

impl PartialEq for HilbExpr {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.aux == other.aux
            && self.mains == other.mains
            && self.model == other.model
            && self.terms == other.terms
    }
}
impl Eq for HilbExpr {}

fn add_hterm(terms: &mut HashMap<HTerm, Q>, t: HTerm, c: Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match terms.entry(t) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl HilbExpr {
    pub fn zero(model: Arc<SurfaceModel>, level: u32, aux: Vec<i32>, mains: u32) -> HilbExpr {
        debug_assert!(aux.windows(2).all(|w| w[0] < w[1]));
        HilbExpr {
            model,
            level,
            aux,
            mains,
            terms: HashMap::new(),
        }
    }

    pub fn one(model: Arc<SurfaceModel>, level: u32, aux: Vec<i32>, mains: u32) -> HilbExpr {
        let mut e = HilbExpr::zero(model, level, aux, mains);
        let part = Part::fundamental(e.arity());
        e.terms.insert(
            HTerm {
                gens: SmallVec::new(),
                part,
            },
            q(1),
        );
        e
    }

    /// Number of X-factors (auxiliary + main).
    pub fn arity(&self) -> usize {
        self.aux.len() + self.mains as usize
    }

    /// Dimension of the ambient product `X^[n] x X^k x X^l`.
    pub fn ambient_dim(&self) -> usize {
        2 * self.level as usize + 2 * self.arity()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn aux_factors(&self) -> &[i32] {
        &self.aux
    }

    pub fn mains(&self) -> u32 {
        self.mains
    }

    pub fn model(&self) -> &Arc<SurfaceModel> {
        &self.model
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Roster position of an X-factor.
    pub fn position(&self, f: XFactor) -> Result<usize, Error> {
        match f {
            XFactor::Aux(i) => self
                .aux
                .iter()
                .position(|&a| a == i)
                .ok_or_else(|| Error::invalid_factor(format!("no auxiliary factor {i}"))),
            XFactor::Main(t) => {
                if t >= 1 && t <= self.mains {
                    Ok(self.aux.len() + (t - 1) as usize)
                } else {
                    Err(Error::invalid_factor(format!("no main factor {t}")))
                }
            }
        }
    }

    fn shape_of(&self) -> HilbExpr {
        HilbExpr::zero(
            self.model.clone(),
            self.level,
            self.aux.clone(),
            self.mains,
        )
    }

    fn check_compat(&self, other: &Self) -> Result<(), Error> {
        if self.level != other.level
            || self.aux != other.aux
            || self.mains != other.mains
            || self.model != other.model
        {
            return Err(Error::shape(
                "expressions live on different products or levels",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<HilbExpr, Error> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            add_hterm(&mut out.terms, t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<HilbExpr, Error> {
        self.add(&other.scale(&-q(1)))
    }

    pub fn scale(&self, by: &Q) -> HilbExpr {
        let mut out = self.shape_of();
        if by.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.clone(), c * by))
            .collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<HilbExpr, Error> {
        self.check_compat(other)?;
        let max_codim = self.ambient_dim();
        let mut out = self.shape_of();
        let right: Vec<(&HTerm, crate::partition::RawTerm, &Q)> = other
            .terms
            .iter()
            .map(|(t, c)| (t, t.part.to_raw(), c))
            .collect();
        for (ta, ca) in &self.terms {
            let ra = ta.part.to_raw();
            let ga_codim = mono_codim(&ta.gens);
            for (tb, rb, cb) in &right {
                if ga_codim + mono_codim(&tb.gens) > max_codim {
                    continue;
                }
                let Some((raw, rc)) = ra.mul(rb, &self.model) else {
                    continue;
                };
                let gens = mono_mul(&ta.gens, &tb.gens);
                let gcodim = mono_codim(&gens);
                let base = ca.clone() * (*cb).clone() * rc;
                for (p, c) in raw.normalize(&self.model) {
                    if gcodim + p.codim() > max_codim {
                        continue;
                    }
                    add_hterm(
                        &mut out.terms,
                        HTerm {
                            gens: gens.clone(),
                            part: p,
                        },
                        &base * c,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Codimension when homogeneous (generators weighted by degree).
    pub fn codim(&self) -> Option<usize> {
        let mut it = self
            .terms
            .keys()
            .map(|t| mono_codim(&t.gens) + t.part.codim());
        let first = it.next()?;
        if it.all(|c| c == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Deterministic rendering, for residual diagnostics.
    pub fn display_sorted(&self) -> String {
        let mut items: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let mut s = format!("({c})");
                for &(g, e) in &t.gens {
                    s.push_str(&format!("·ch{}(I{}^({}))", g.degree, self.level, g.factor));
                    if e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
                s.push_str(&format!("·{}", t.part));
                s
            })
            .collect();
        items.sort();
        items.join(" + ")
    }
}

impl fmt::Debug for HilbExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HilbExpr[n={}, aux={:?}, l={}] {}",
            self.level,
            self.aux,
            self.mains,
            self.display_sorted()
        )
    }
}

impl CommRing for HilbExpr {
    fn zero(&self) -> Self {
        self.shape_of()
    }
    fn one(&self) -> Self {
        HilbExpr::one(
            self.model.clone(),
            self.level,
            self.aux.clone(),
            self.mains,
        )
    }
    fn add(&self, other: &Self) -> Self {
        HilbExpr::add(self, other).expect("newton operands share one shape")
    }
    fn mul(&self, other: &Self) -> Self {
        HilbExpr::mul(self, other).expect("newton operands share one shape")
    }
    fn scale(&self, by: &Q) -> Self {
        HilbExpr::scale(self, by)
    }
}

// ---------------------------------------------------------------------------
// Generator constructors
// ---------------------------------------------------------------------------

/// `ch_degree` of the universal ideal sheaf (normalized = rank-zero virtual
/// version) paired with factor `f`, as an expression on the given product.
///
/// Auto-simplifications: `ch_0(I_n) = 1` and `ch_1(I_n) = 0` since the
/// universal subscheme has codimension 2; for the normalized sheaf `ch_0 = 0`
/// and `ch_2` picks up `n·c_X` on the paired factor. Degrees above the
/// ambient dimension vanish.
pub fn ch_gen(
    model: Arc<SurfaceModel>,
    level: u32,
    aux: Vec<i32>,
    mains: u32,
    f: XFactor,
    degree: u32,
    normalized: bool,
) -> Result<HilbExpr, Error> {
    let shape = HilbExpr::zero(model.clone(), level, aux.clone(), mains);
    shape.position(f)?;
    if degree as usize > shape.ambient_dim() {
        return Ok(shape);
    }
    match degree {
        0 => {
            if normalized {
                Ok(shape) // rank zero
            } else {
                Ok(HilbExpr::one(model, level, aux, mains))
            }
        }
        1 => Ok(shape), // c_1(I_n) = 0
        2 => {
            let mut e = raw_gen(&shape, f, 2);
            if normalized {
                let c = partition_class_point(&shape, f)?.scale(&q(level as i64));
                e = e.add(&c)?;
            }
            Ok(e)
        }
        d => Ok(raw_gen(&shape, f, d as u8)),
    }
}

/// Whether `ch_degree(I_level)` is identically zero: degrees above the
/// ambient dimension always are, and at level 1 the character of the ideal
/// sheaf of the diagonal is concentrated in degrees 0, 2 and 4.
fn gen_vanishes(level: u32, degree: usize, ambient: usize) -> bool {
    degree > ambient || (level == 1 && degree != 2 && degree != 4)
}

fn raw_gen(shape: &HilbExpr, f: XFactor, degree: u8) -> HilbExpr {
    if gen_vanishes(shape.level, degree as usize, shape.ambient_dim()) {
        return shape.shape_of();
    }
    let mut e = shape.shape_of();
    let gens: ChMono = smallvec![(ChGen { factor: f, degree }, 1u8)];
    e.terms.insert(
        HTerm {
            gens,
            part: Part::fundamental(shape.arity()),
        },
        q(1),
    );
    e
}

/// `c_X` on factor `f`.
pub fn partition_class_point(shape: &HilbExpr, f: XFactor) -> Result<HilbExpr, Error> {
    let pos = shape.position(f)?;
    let part = Part::from_blocks(shape.arity(), &[(smallvec![pos as u8], Dec::Pt)]);
    Ok(from_part(shape, part))
}

/// Basis divisor `D_j` on factor `f`.
pub fn partition_class_divisor(shape: &HilbExpr, f: XFactor, j: usize) -> Result<HilbExpr, Error> {
    if j >= shape.model.ns_rank() {
        return Err(Error::invalid_factor(format!("no basis divisor {j}")));
    }
    let pos = shape.position(f)?;
    let part = Part::from_blocks(shape.arity(), &[(smallvec![pos as u8], Dec::Div(j as u16))]);
    Ok(from_part(shape, part))
}

/// Diagonal of two distinct factors.
pub fn partition_class_diagonal(
    shape: &HilbExpr,
    f1: XFactor,
    f2: XFactor,
) -> Result<HilbExpr, Error> {
    if f1 == f2 {
        return Err(Error::invalid_factor("diagonal needs distinct factors"));
    }
    let p1 = shape.position(f1)?;
    let p2 = shape.position(f2)?;
    let part = Part::from_blocks(
        shape.arity(),
        &[(smallvec![p1 as u8, p2 as u8], Dec::Fund)],
    );
    Ok(from_part(shape, part))
}

/// `ch_i` of the structure sheaf of the normalized diagonal on `(r, s)`
/// (point on the second argument).
pub fn partition_class_ch_o_diagonal_bar(
    shape: &HilbExpr,
    r: XFactor,
    s: XFactor,
    i: u32,
) -> Result<HilbExpr, Error> {
    if r == s {
        return Err(Error::invalid_factor(
            "normalized diagonal needs distinct factors",
        ));
    }
    match i {
        2 => {
            let d = partition_class_diagonal(shape, r, s)?;
            let c = partition_class_point(shape, s)?;
            d.sub(&c)
        }
        4 => {
            let cc = partition_class_point(shape, r)?.mul(&partition_class_point(shape, s)?)?;
            Ok(cc.scale(&-q(2)))
        }
        _ => Ok(shape.shape_of()),
    }
}

fn from_part(shape: &HilbExpr, part: Part) -> HilbExpr {
    let mut e = shape.shape_of();
    e.terms.insert(
        HTerm {
            gens: SmallVec::new(),
            part,
        },
        q(1),
    );
    e
}

// ---------------------------------------------------------------------------
// The nested-scheme step
// ---------------------------------------------------------------------------

/// A polynomial in the hyperplane class of the nested Hilbert scheme, with
/// coefficients one level down. `coeffs[j]` multiplies the j-th hyperplane
/// power.
#[derive(Debug, Clone)]
pub struct NestedExpr {
    /// The lower level `n` (coefficients live on `X^[n] x ...`).
    pub level: u32,
    coeffs: Vec<HilbExpr>,
    hyper_cap: usize,
}

impl NestedExpr {
    pub fn coeff(&self, j: usize) -> Option<&HilbExpr> {
        self.coeffs.get(j)
    }

    pub fn hyper_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().map(|c| c.num_terms()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    /// Multiplication by one hyperplane factor; powers beyond the nilpotency
    /// cap vanish.
    pub fn mul_hyperplane(&self) -> NestedExpr {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        if let Some(first) = self.coeffs.first() {
            coeffs.push(first.shape_of());
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            if j + 1 <= self.hyper_cap {
                coeffs.push(c.clone());
            }
        }
        let mut out = NestedExpr {
            level: self.level,
            coeffs,
            hyper_cap: self.hyper_cap,
        };
        out.trim();
        out
    }

    fn mul(&self, other: &NestedExpr) -> Result<NestedExpr, Error> {
        let shape = self
            .coeffs
            .first()
            .or_else(|| other.coeffs.first())
            .expect("nested expressions carry a shape")
            .shape_of();
        let deg = self.coeffs.len() + other.coeffs.len();
        let mut coeffs: Vec<HilbExpr> = (0..deg.max(1)).map(|_| shape.shape_of()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (jj, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() || i + jj > self.hyper_cap {
                    continue;
                }
                let prod = a.mul(b)?;
                coeffs[i + jj] = coeffs[i + jj].add(&prod)?;
            }
        }
        let mut out = NestedExpr {
            level: self.level,
            coeffs,
            hyper_cap: self.hyper_cap,
        };
        out.trim();
        Ok(out)
    }
}

/// Pulls a level-`n+1` expression back to the nested Hilbert scheme.
///
/// Each generator `ch_d(I_{n+1}^(t))` becomes
/// `ch_d(I_n^(t)) - h^{d-2}/(d-2)!·Δ(0',t) + 2·h^{d-4}/(d-4)!·c(0')c(t)`,
/// where `h` is the hyperplane class and `0'` the fresh X-factor, appended
/// as the lowest-index auxiliary factor. Pure partition classes pull back
/// unchanged. Powers of `h` above the nested scheme's dimension vanish.
pub fn nested_pullback(e: &HilbExpr) -> Result<NestedExpr, Error> {
    if e.level < 2 {
        return Err(Error::input(
            "level-1 expressions evaluate at the base, not through the nested scheme",
        ));
    }
    let lower = e.level - 1;
    let fresh: i32 = e.aux.iter().copied().min().map_or(0, |m| m.min(1) - 1);
    let mut aux = e.aux.clone();
    aux.insert(0, fresh);
    let shape = HilbExpr::zero(e.model.clone(), lower, aux, e.mains);
    // Hyperplane powers above the nested scheme's dimension vanish.
    let nested_dim = 2 * lower as usize + 2;
    let hyper_cap = nested_dim;
    let fresh_f = XFactor::Aux(fresh);

    let mut out = NestedExpr {
        level: lower,
        coeffs: vec![shape.shape_of()],
        hyper_cap,
    };
    for (term, coeff) in &e.terms {
        // The partition part is inert: lift across the fresh position 0.
        let lifted = from_part(&shape, term.part.insert(0)).scale(coeff);
        let mut acc = NestedExpr {
            level: lower,
            coeffs: vec![lifted],
            hyper_cap,
        };
        for &(g, exp) in &term.gens {
            let image = pullback_gen(&shape, fresh_f, g, hyper_cap)?;
            for _ in 0..exp {
                acc = acc.mul(&image)?;
            }
        }
        for (j, c) in acc.coeffs.iter().enumerate() {
            if out.coeffs.len() <= j {
                out.coeffs.resize_with(j + 1, || shape.shape_of());
            }
            out.coeffs[j] = out.coeffs[j].add(c)?;
        }
    }
    out.trim();
    Ok(out)
}

fn pullback_gen(
    shape: &HilbExpr,
    fresh: XFactor,
    g: ChGen,
    hyper_cap: usize,
) -> Result<NestedExpr, Error> {
    let d = g.degree as usize;
    debug_assert!(d >= 2);
    let top = (d - 2).min(hyper_cap);
    let mut coeffs: Vec<HilbExpr> = (0..=top).map(|_| shape.shape_of()).collect();
    // ch_d at the lower level (degrees above the ambient vanish).
    if d <= shape.ambient_dim() {
        coeffs[0] = coeffs[0].add(&raw_gen(shape, g.factor, g.degree))?;
    }
    if d - 2 <= hyper_cap {
        let diag = partition_class_diagonal(shape, fresh, g.factor)?;
        let c = -q(1) / factorial(d - 2);
        coeffs[d - 2] = coeffs[d - 2].add(&diag.scale(&c))?;
    }
    if d >= 4 && d - 4 <= hyper_cap {
        let cc =
            partition_class_point(shape, fresh)?.mul(&partition_class_point(shape, g.factor)?)?;
        let c = q(2) / factorial(d - 4);
        coeffs[d - 4] = coeffs[d - 4].add(&cc.scale(&c))?;
    }
    let mut out = NestedExpr {
        level: shape.level(),
        coeffs,
        hyper_cap,
    };
    out.trim();
    Ok(out)
}

/// Pushes a nested-scheme expression down to `X^[n] x X x ...`: the j-th
/// hyperplane power becomes `(-1)^j c_j(-I_n)` on the fresh factor,
/// expressed through the Newton identities. The fresh factor stays as a
/// permanent auxiliary factor of the result.
pub fn nested_pushforward(ne: &NestedExpr) -> Result<HilbExpr, Error> {
    let shape = ne
        .coeffs
        .first()
        .expect("nested expressions carry a shape")
        .shape_of();
    let fresh = XFactor::Aux(shape.aux[0]);
    let mut out = shape.shape_of();
    for (j, coeff) in ne.coeffs.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let weight = hyperplane_pushforward_weight(&shape, fresh, j)?;
        out = out.add(&coeff.mul(&weight)?)?;
    }
    Ok(out)
}

/// `(-1)^j c_j(-I_n)` on the given factor, as a generator polynomial.
pub fn hyperplane_pushforward_weight(
    shape: &HilbExpr,
    f: XFactor,
    j: usize,
) -> Result<HilbExpr, Error> {
    if j == 0 {
        return Ok(HilbExpr::one(
            shape.model.clone(),
            shape.level,
            shape.aux.clone(),
            shape.mains,
        ));
    }
    // ch_i(-I_n) = -ch_i(I_n); ch_1 vanishes.
    let ch: Vec<HilbExpr> = (1..=j)
        .map(|i| {
            if i == 1 || i > shape.ambient_dim() {
                shape.shape_of()
            } else {
                raw_gen(shape, f, i as u8).scale(&-q(1))
            }
        })
        .collect();
    let c = chern_from_character(&shape.shape_of(), &ch);
    let sign = if j % 2 == 0 { q(1) } else { -q(1) };
    Ok(c[j - 1].scale(&sign))
}

// ---------------------------------------------------------------------------
// Base case
// ---------------------------------------------------------------------------

/// Evaluates a level-1 expression in the surface calculus. The Hilbert
/// factor `X^[1] = X` becomes position 0 of the resulting power; the
/// universal ideal sheaf of one point is the ideal of the diagonal, so
/// `ch_2 = -Δ`, `ch_4 = 2·c x c` and all other components vanish.
pub fn base_evaluate(e: &HilbExpr) -> Result<TautClass, Error> {
    if e.level != 1 {
        return Err(Error::input(format!(
            "base evaluation needs level 1, got {}",
            e.level
        )));
    }
    let arity = 1 + e.arity();
    let model = e.model.clone();
    let mut out = TautClass::zero(model.clone(), arity);
    for (term, coeff) in &e.terms {
        let mut acc = TautClass::from_term(model.clone(), term.part.insert(0), coeff.clone());
        for &(g, exp) in &term.gens {
            if acc.is_zero() {
                break;
            }
            let pos = e.position(g.factor)? + 1;
            let value = match g.degree {
                2 => taut::diagonal(model.clone(), arity, 0, pos)?.neg(),
                4 => taut::point(model.clone(), arity, 0)
                    .mul(&taut::point(model.clone(), arity, pos))?
                    .scale(&q(2)),
                _ => TautClass::zero(model.clone(), arity),
            };
            for _ in 0..exp {
                acc = acc.mul(&value)?;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The zero-decision recursion
// ---------------------------------------------------------------------------

/// Outcome of a vanishing check. `CertifiedZero` is only emitted when the
/// full recursion reduced to the empty normal form; every rewrite on the way
/// is a Chow identity, so it certifies vanishing. A nonempty residual is
/// reported as inconclusive, never as nonvanishing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CertifiedZero,
    Inconclusive(Residual),
    InputError(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub reason: String,
    pub terms: usize,
    pub sample: String,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedZero)
    }
}

/// Per-node accounting of the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub level: u32,
    /// Which hyperplane branches led here, e.g. "" (root), "0", "01".
    pub branch: String,
    pub terms: usize,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyStats {
    pub trace: Vec<TraceEntry>,
    pub peak_terms: usize,
    pub wall_ms: u128,
}

pub struct VerifyOptions {
    pub term_ceiling: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            term_ceiling: 4_000_000,
        }
    }
}

/// Decides vanishing of `e` by recursion through the nested Hilbert scheme.
pub fn verify_zero(e: &HilbExpr) -> Verdict {
    verify_zero_with(e, &VerifyOptions::default()).0
}

pub fn verify_zero_with(e: &HilbExpr, opts: &VerifyOptions) -> (Verdict, VerifyStats) {
    let started = Instant::now();
    let mut stats = VerifyStats::default();
    let verdict = verify_rec(e, opts, &mut stats, String::new());
    stats.wall_ms = started.elapsed().as_millis();
    (verdict, stats)
}

fn verify_rec(
    e: &HilbExpr,
    opts: &VerifyOptions,
    stats: &mut VerifyStats,
    branch: String,
) -> Verdict {
    stats.trace.push(TraceEntry {
        level: e.level,
        branch: branch.clone(),
        terms: e.num_terms(),
    });
    stats.peak_terms = stats.peak_terms.max(e.num_terms());
    if e.is_zero() {
        return Verdict::CertifiedZero;
    }
    if e.num_terms() > opts.term_ceiling {
        return Verdict::Inconclusive(Residual {
            reason: format!(
                "term ceiling exceeded: {} > {}",
                e.num_terms(),
                opts.term_ceiling
            ),
            terms: e.num_terms(),
            sample: String::new(),
        });
    }
    if e.level == 1 {
        let base = match base_evaluate(e) {
            Ok(b) => b,
            Err(err) => return Verdict::InputError(err.to_string()),
        };
        stats.peak_terms = stats.peak_terms.max(base.num_terms());
        if base.is_zero() {
            return Verdict::CertifiedZero;
        }
        let sample = {
            let mut s = format!("{base}");
            if s.len() > 400 {
                s.truncate(400);
                s.push_str(" ...");
            }
            s
        };
        return Verdict::Inconclusive(Residual {
            reason: "nonzero normal form at base".into(),
            terms: base.num_terms(),
            sample,
        });
    }

    let input_codim = e.codim();
    let ne = match nested_pullback(e) {
        Ok(ne) => ne,
        Err(err) => return Verdict::InputError(err.to_string()),
    };
    stats.peak_terms = stats.peak_terms.max(ne.num_terms());
    for (which, nested) in [(0u8, ne.clone()), (1u8, ne.mul_hyperplane())] {
        let pushed = match nested_pushforward(&nested) {
            Ok(p) => p,
            Err(err) => return Verdict::InputError(err.to_string()),
        };
        // Grading: the pushforward preserves total codimension (hyperplane
        // powers count one each and trade into Chern classes of the same
        // weight).
        if let (Some(din), Some(dout)) = (input_codim, pushed.codim()) {
            assert_eq!(
                dout,
                din + which as usize,
                "pushforward must preserve the grading"
            );
        }
        let sub = verify_rec(&pushed, opts, stats, format!("{branch}{which}"));
        if !sub.is_certified() {
            return sub;
        }
    }
    Verdict::CertifiedZero
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// A small expression tree for the class `alpha` on `X^[n] x X^k`:
/// polynomials in generators on the auxiliary factors.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaExpr {
    Const(Q),
    Sum(Vec<AlphaExpr>),
    Product(Vec<AlphaExpr>),
    /// `c_X` on an auxiliary factor (1-based).
    Cx { aux: u32 },
    /// Basis divisor on an auxiliary factor.
    Div { aux: u32, basis: u32 },
    /// Diagonal of two auxiliary factors.
    Diag { aux: (u32, u32) },
    /// `ch_degree` of the universal ideal sheaf paired with an auxiliary
    /// factor.
    Ch {
        aux: u32,
        degree: u32,
        normalized: bool,
    },
}

impl AlphaExpr {
    pub fn one() -> AlphaExpr {
        AlphaExpr::Product(vec![])
    }

    pub(crate) fn build(&self, shape: &HilbExpr, k: u32) -> Result<HilbExpr, Error> {
        let auxf = |a: u32| -> Result<XFactor, Error> {
            if a >= 1 && a <= k {
                Ok(XFactor::Aux(a as i32))
            } else {
                Err(Error::input(format!(
                    "alpha references auxiliary factor {a}, but k = {k}"
                )))
            }
        };
        match self {
            AlphaExpr::Const(c) => Ok(shape.one().scale(c)),
            AlphaExpr::Sum(items) => {
                let mut acc = shape.shape_of();
                for item in items {
                    acc = acc.add(&item.build(shape, k)?)?;
                }
                Ok(acc)
            }
            AlphaExpr::Product(items) => {
                let mut acc = shape.one();
                for item in items {
                    acc = acc.mul(&item.build(shape, k)?)?;
                }
                Ok(acc)
            }
            AlphaExpr::Cx { aux } => partition_class_point(shape, auxf(*aux)?),
            AlphaExpr::Div { aux, basis } => {
                partition_class_divisor(shape, auxf(*aux)?, *basis as usize)
            }
            AlphaExpr::Diag { aux: (a, b) } => partition_class_diagonal(shape, auxf(*a)?, auxf(*b)?),
            AlphaExpr::Ch {
                aux,
                degree,
                normalized,
            } => ch_gen(
                shape.model().clone(),
                shape.level(),
                shape.aux_factors().to_vec(),
                shape.mains(),
                auxf(*aux)?,
                *degree,
                *normalized,
            ),
        }
    }
}

/// One vanishing instance: the data of the product-identity statement for
/// `X^[n] x X^k x X^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub alpha: AlphaExpr,
    pub omega: BTreeSet<u32>,
    pub theta: BTreeSet<u32>,
    /// For `t` in theta: the auxiliary factor its normalized diagonal pairs
    /// with (1-based).
    pub assignment: BTreeMap<u32, u32>,
    /// `i_1..i_l`.
    pub indices: Vec<u32>,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n < 1 {
            return Err(Error::input("n must be at least 1"));
        }
        if self.l < 1 {
            return Err(Error::input("l must be at least 1"));
        }
        if self.indices.len() != self.l as usize {
            return Err(Error::input(format!(
                "expected {} indices, got {}",
                self.l,
                self.indices.len()
            )));
        }
        let all: BTreeSet<u32> = (1..=self.l).collect();
        if !self.omega.is_disjoint(&self.theta) {
            return Err(Error::input("omega and theta must be disjoint"));
        }
        let union: BTreeSet<u32> = self.omega.union(&self.theta).copied().collect();
        if union != all {
            return Err(Error::input(
                "omega and theta must partition the main factors 1..=l",
            ));
        }
        let dom: BTreeSet<u32> = self.assignment.keys().copied().collect();
        if dom != self.theta {
            return Err(Error::input(
                "the assignment must be defined exactly on theta",
            ));
        }
        for (&t, &s) in &self.assignment {
            if s < 1 || s > self.k {
                return Err(Error::input(format!(
                    "assignment of main factor {t} points to auxiliary factor {s}, but k = {}",
                    self.k
                )));
            }
        }
        Ok(())
    }

    /// Codimension of alpha, which must be homogeneous.
    pub fn alpha_codim(&self, model: &Arc<SurfaceModel>) -> Result<usize, Error> {
        let alpha = self.build_alpha(model)?;
        if alpha.is_zero() {
            return Ok(0);
        }
        alpha
            .codim()
            .ok_or_else(|| Error::input("alpha must be homogeneous"))
    }

    fn build_alpha(&self, model: &Arc<SurfaceModel>) -> Result<HilbExpr, Error> {
        let aux: Vec<i32> = (1..=self.k as i32).collect();
        let shape = HilbExpr::zero(model.clone(), self.n, aux, self.l);
        self.alpha.build(&shape, self.k)
    }
}

/// Assembles the instance product: alpha times the normalized-sheaf
/// characters over omega and the normalized-diagonal characters over theta.
/// Errors when the codimension hypothesis `d + l > 2n + 2k` fails.
pub fn build_gamma(spec: &InstanceSpec, model: &Arc<SurfaceModel>) -> Result<HilbExpr, Error> {
    spec.validate()?;
    let alpha = spec.build_alpha(model)?;
    if !alpha.is_zero() {
        let d = alpha
            .codim()
            .ok_or_else(|| Error::input("alpha must be homogeneous"))?;
        if d + spec.l as usize <= 2 * (spec.n as usize) + 2 * (spec.k as usize) {
            return Err(Error::input(format!(
                "codimension hypothesis fails: d + l = {} + {} is not greater than 2n + 2k = {}",
                d,
                spec.l,
                2 * spec.n + 2 * spec.k
            )));
        }
    }
    let mut gamma = alpha;
    for &t in &spec.omega {
        let i = spec.indices[(t - 1) as usize];
        let g = ch_gen(
            model.clone(),
            spec.n,
            gamma.aux_factors().to_vec(),
            spec.l,
            XFactor::Main(t),
            i,
            true,
        )?;
        gamma = gamma.mul(&g)?;
        if gamma.is_zero() {
            return Ok(gamma);
        }
    }
    for (&t, &s) in &spec.assignment {
        let i = spec.indices[(t - 1) as usize];
        let g =
            partition_class_ch_o_diagonal_bar(&gamma, XFactor::Aux(s as i32), XFactor::Main(t), i)?;
        gamma = gamma.mul(&g)?;
        if gamma.is_zero() {
            return Ok(gamma);
        }
    }
    Ok(gamma)
}

/// Runs one instance end to end, with timing and term-count accounting.
pub fn verify_instance(
    spec: &InstanceSpec,
    model: &Arc<SurfaceModel>,
    opts: &VerifyOptions,
) -> (Verdict, VerifyStats) {
    let gamma = match build_gamma(spec, model) {
        Ok(g) => g,
        Err(e) => return (Verdict::InputError(e.to_string()), VerifyStats::default()),
    };
    let (verdict, stats) = verify_zero_with(&gamma, opts);
    // The recursion peels one point at a time: depth n-1, and each step
    // turns the fresh factor into a permanent auxiliary one.
    debug_assert!(stats
        .trace
        .iter()
        .filter(|t| t.level == 1)
        .all(|t| t.branch.len() == (spec.n - 1) as usize));
    (verdict, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> Arc<SurfaceModel> {
        SurfaceModel::default_model()
    }

    fn simple_spec(n: u32, k: u32, l: u32, indices: Vec<u32>) -> InstanceSpec {
        InstanceSpec {
            n,
            k,
            l,
            alpha: AlphaExpr::one(),
            omega: (1..=l).collect(),
            theta: BTreeSet::new(),
            assignment: BTreeMap::new(),
            indices,
        }
    }

    #[test]
    fn base_values_of_the_ideal_sheaf() {
        let m = model();
        // ch_2 of the normalized sheaf at level 1 is minus the normalized
        // diagonal.
        let e = ch_gen(m.clone(), 1, vec![], 1, XFactor::Main(1), 2, true).unwrap();
        let base = base_evaluate(&e).unwrap();
        let expected = taut::normalized_diagonal(m.clone(), 2, 0, 1).unwrap().neg();
        assert_eq!(base, expected);
        // ch_4 = 2 c x c, unchanged by normalization.
        let e4 = ch_gen(m.clone(), 1, vec![], 1, XFactor::Main(1), 4, true).unwrap();
        let base4 = base_evaluate(&e4).unwrap();
        let cc = taut::point(m.clone(), 2, 0)
            .mul(&taut::point(m.clone(), 2, 1))
            .unwrap();
        assert_eq!(base4, cc.scale(&q(2)));
        // No odd components.
        let e3 = ch_gen(m.clone(), 1, vec![], 1, XFactor::Main(1), 3, true).unwrap();
        assert!(base_evaluate(&e3).unwrap().is_zero());
    }

    #[test]
    fn ch_gen_auto_simplifications() {
        let m = model();
        let z = ch_gen(m.clone(), 2, vec![], 1, XFactor::Main(1), 1, false).unwrap();
        assert!(z.is_zero());
        let one = ch_gen(m.clone(), 2, vec![], 1, XFactor::Main(1), 0, false).unwrap();
        assert_eq!(one, one.one());
        let zbar = ch_gen(m.clone(), 2, vec![], 1, XFactor::Main(1), 0, true).unwrap();
        assert!(zbar.is_zero());
        // Degrees above the ambient dimension vanish.
        let big = ch_gen(m, 1, vec![], 1, XFactor::Main(1), 9, false).unwrap();
        assert!(big.is_zero());
    }

    #[test]
    fn gamma_at_level_one_is_the_triple_diagonal_product() {
        let m = model();
        let spec = simple_spec(1, 0, 3, vec![2, 2, 2]);
        let gamma = build_gamma(&spec, &m).unwrap();
        let base = base_evaluate(&gamma).unwrap();
        // (-Δ̄01)(-Δ̄02)(-Δ̄03) = -bv product = 0.
        assert!(base.is_zero());
    }

    #[test]
    fn gamma_vanishes_when_an_index_is_one() {
        let m = model();
        let spec = simple_spec(1, 0, 3, vec![2, 1, 2]);
        let gamma = build_gamma(&spec, &m).unwrap();
        assert!(gamma.is_zero());
    }

    #[test]
    fn hypothesis_violation_is_an_input_error() {
        let m = model();
        // alpha = 1, d = 0: need l > 2n + 2k; l = 2 fails at n = 1.
        let spec = simple_spec(1, 0, 2, vec![2, 2]);
        assert!(matches!(build_gamma(&spec, &m), Err(Error::Input(_))));
        let (verdict, _) = verify_instance(&spec, &m, &VerifyOptions::default());
        assert!(matches!(verdict, Verdict::InputError(_)));
    }

    #[test]
    fn pullback_of_ch2_has_no_hyperplane_part() {
        let m = model();
        let e = ch_gen(m.clone(), 2, vec![], 1, XFactor::Main(1), 2, true).unwrap();
        let ne = nested_pullback(&e).unwrap();
        assert_eq!(ne.hyper_degree(), 0);
        // The constant coefficient is ch_2 one level down minus the
        // normalized diagonal against the fresh factor.
        let shape = ne.coeff(0).unwrap();
        assert_eq!(shape.level(), 1);
        assert_eq!(shape.aux_factors(), &[0]);
        let zero_shape = HilbExpr::zero(m.clone(), 1, vec![0], 1);
        let expected = ch_gen(m.clone(), 1, vec![0], 1, XFactor::Main(1), 2, true)
            .unwrap()
            .sub(
                &partition_class_ch_o_diagonal_bar(
                    &zero_shape,
                    XFactor::Aux(0),
                    XFactor::Main(1),
                    2,
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(shape, &expected);
    }

    #[test]
    fn pullback_rejects_level_one() {
        let m = model();
        let e = ch_gen(m, 1, vec![], 1, XFactor::Main(1), 2, true).unwrap();
        assert!(nested_pullback(&e).is_err());
    }

    #[test]
    fn pushforward_weights_match_the_newton_oracle() {
        let m = model();
        let shape = HilbExpr::zero(m.clone(), 1, vec![0], 1);
        // degree 0: the unit.
        let w0 = hyperplane_pushforward_weight(&shape, XFactor::Aux(0), 0).unwrap();
        assert_eq!(w0, shape.one());
        // degree 1: c_1 of the ideal sheaf vanishes.
        let w1 = hyperplane_pushforward_weight(&shape, XFactor::Aux(0), 1).unwrap();
        assert!(w1.is_zero());
        // degree 2: c_2(-I_n) = ch_2(I_n).
        let w2 = hyperplane_pushforward_weight(&shape, XFactor::Aux(0), 2).unwrap();
        let expected = raw_gen(&shape, XFactor::Aux(0), 2);
        assert_eq!(w2, expected);
    }

    #[test]
    fn lemma_branches_certify_the_n2_generalization() {
        let m = model();
        let spec = simple_spec(2, 0, 5, vec![2; 5]);
        let (verdict, stats) = verify_instance(&spec, &m, &VerifyOptions::default());
        assert_eq!(verdict, Verdict::CertifiedZero);
        // depth n-1 = 1: base nodes carry one branch digit.
        assert!(stats
            .trace
            .iter()
            .any(|t| t.level == 1 && t.branch.len() == 1));
    }

    #[test]
    fn a_single_generator_is_inconclusive_not_certified() {
        let m = model();
        let e = ch_gen(m, 2, vec![], 1, XFactor::Main(1), 2, true).unwrap();
        let verdict = verify_zero(&e);
        assert!(matches!(verdict, Verdict::Inconclusive(_)));
    }

    #[test]
    fn base_consistency_of_level_one_verify() {
        let m = model();
        // For level-1 expressions, verify_zero agrees with direct base
        // evaluation.
        let e = ch_gen(m.clone(), 1, vec![], 2, XFactor::Main(1), 2, true).unwrap();
        let f = ch_gen(m.clone(), 1, vec![], 2, XFactor::Main(2), 2, true).unwrap();
        let prod = e.mul(&f).unwrap();
        let base_zero = base_evaluate(&prod).unwrap().is_zero();
        assert_eq!(verify_zero(&prod).is_certified(), base_zero);
    }

    #[test]
    fn theta_factors_expand_to_diagonal_characters() {
        let m = model();
        // c_X on the auxiliary factor times ch_4 of the normalized-diagonal
        // sheaf on the same factor: the c_X·c_X product dies immediately.
        let shape = HilbExpr::zero(m.clone(), 1, vec![1], 1);
        let alpha = partition_class_point(&shape, XFactor::Aux(1)).unwrap();
        let theta = partition_class_ch_o_diagonal_bar(
            &shape,
            XFactor::Aux(1),
            XFactor::Main(1),
            4,
        )
        .unwrap();
        assert!(!theta.is_zero());
        assert!(alpha.mul(&theta).unwrap().is_zero());
        // A theta factor with a hypothesis-satisfying instance: n=1, k=1,
        // l=5, alpha of codimension 2.
        let spec = InstanceSpec {
            n: 1,
            k: 1,
            l: 5,
            alpha: AlphaExpr::Cx { aux: 1 },
            omega: (2..=5).collect(),
            theta: [1u32].into_iter().collect(),
            assignment: [(1u32, 1u32)].into_iter().collect(),
            indices: vec![2; 5],
        };
        let gamma = build_gamma(&spec, &m).unwrap();
        // c_X on aux 1 meets the normalized diagonal paired with aux 1.
        assert!(gamma.is_zero());
    }

    #[test]
    fn term_ceiling_reports_inconclusive() {
        let m = model();
        let spec = simple_spec(2, 0, 5, vec![2; 5]);
        let gamma = build_gamma(&spec, &m).unwrap();
        let (verdict, _) = verify_zero_with(&gamma, &VerifyOptions { term_ceiling: 1 });
        assert!(matches!(verdict, Verdict::Inconclusive(_)));
    }
}
