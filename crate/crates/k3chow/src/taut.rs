//! Exact linear combinations of decorated partitions: the tautological ring
//! `R_*(X^m)` of a K3 power, with ring operations, projections along factors
//! and the builders for the fundamental identity classes.
//!
//! `is_zero` on a normal form is a *certificate* of vanishing in the Chow
//! ring, because every rewrite applied along the way is a Chow identity.
//! A nonempty normal form certifies nothing.

use crate::partition::{Dec, Part, RawTerm};
use crate::rational::{q, Q};
use crate::surface::{DivisorClass, SurfaceModel};
use crate::Error;
use num::traits::Zero;
use smallvec::smallvec;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// An element of the tautological ring of `X^arity`, stored as a sparse map
/// from normal-form partitions to nonzero rational coefficients.
#[derive(Clone)]
pub struct TautClass {
    model: Arc<SurfaceModel>,
    arity: usize,
    terms: HashMap<Part, Q>,
}

impl PartialEq for TautClass {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.model == other.model && self.terms == other.terms
    }
}
impl Eq for TautClass {}

fn add_term(terms: &mut HashMap<Part, Q>, part: Part, coeff: Q) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match terms.entry(part) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl TautClass {
    pub fn zero(model: Arc<SurfaceModel>, arity: usize) -> TautClass {
        TautClass {
            model,
            arity,
            terms: HashMap::new(),
        }
    }

    /// The multiplicative unit `1` on `X^arity`.
    pub fn one(model: Arc<SurfaceModel>, arity: usize) -> TautClass {
        let mut terms = HashMap::new();
        terms.insert(Part::fundamental(arity), q(1));
        TautClass {
            model,
            arity,
            terms,
        }
    }

    pub fn from_term(model: Arc<SurfaceModel>, part: Part, coeff: Q) -> TautClass {
        let arity = part.arity();
        let mut terms = HashMap::new();
        add_term(&mut terms, part, coeff);
        TautClass {
            model,
            arity,
            terms,
        }
    }

    pub fn model(&self) -> &Arc<SurfaceModel> {
        &self.model
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True iff the normal form is empty. This certifies vanishing in the
    /// Chow ring; `false` only means "not reduced to zero".
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Part, &Q)> {
        self.terms.iter()
    }

    /// Terms in a deterministic order.
    pub fn sorted_terms(&self) -> Vec<(Part, Q)> {
        let mut v: Vec<(Part, Q)> = self
            .terms
            .iter()
            .map(|(p, c)| (p.clone(), c.clone()))
            .collect();
        v.sort_by(|(a, _), (b, _)| a.sort_key().cmp(&b.sort_key()));
        v
    }

    fn check_compat(&self, other: &TautClass) -> Result<(), Error> {
        if self.arity != other.arity {
            return Err(Error::shape(format!(
                "classes live on X^{} and X^{}",
                self.arity, other.arity
            )));
        }
        if self.model != other.model {
            return Err(Error::shape("classes use different surface models"));
        }
        Ok(())
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass, Error> {
        self.check_compat(other)?;
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            add_term(&mut terms, p.clone(), c.clone());
        }
        Ok(TautClass {
            model: self.model.clone(),
            arity: self.arity,
            terms,
        })
    }

    pub fn sub(&self, other: &TautClass) -> Result<TautClass, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TautClass {
        self.scale(&-q(1))
    }

    pub fn scale(&self, by: &Q) -> TautClass {
        if by.is_zero() {
            return TautClass::zero(self.model.clone(), self.arity);
        }
        TautClass {
            model: self.model.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c * by))
                .collect(),
        }
    }

    /// Ring product, in normal form. Diagonal blocks sharing factors merge
    /// with excess factors `24 c_X`, decorations multiply inside a factor,
    /// and oversize blocks are rewritten by the fundamental identities.
    pub fn mul(&self, other: &TautClass) -> Result<TautClass, Error> {
        self.check_compat(other)?;
        let mut terms: HashMap<Part, Q> = HashMap::new();
        let right: Vec<(RawTerm, &Q)> = other
            .terms
            .iter()
            .map(|(p, c)| (p.to_raw(), c))
            .collect();
        for (pa, ca) in &self.terms {
            let ra = pa.to_raw();
            for (rb, cb) in &right {
                let Some((raw, rc)) = ra.mul(rb, &self.model) else {
                    continue;
                };
                let base = ca * *cb * rc;
                for (p, c) in raw.normalize(&self.model) {
                    add_term(&mut terms, p, &base * c);
                }
            }
        }
        Ok(TautClass {
            model: self.model.clone(),
            arity: self.arity,
            terms,
        })
    }

    /// Pushforward along the projection forgetting factor `pos`: a point
    /// singleton has degree 1, fundamental and divisor singletons die, and a
    /// factor inside a diagonal block is deleted from it.
    pub fn pushforward_forget(&self, pos: usize) -> Result<TautClass, Error> {
        if pos >= self.arity {
            return Err(Error::invalid_factor(format!(
                "factor {pos} not present on X^{}",
                self.arity
            )));
        }
        let mut terms: HashMap<Part, Q> = HashMap::new();
        for (p, c) in &self.terms {
            if let Some(np) = p.forget(pos) {
                add_term(&mut terms, np, c.clone());
            }
        }
        Ok(TautClass {
            model: self.model.clone(),
            arity: self.arity - 1,
            terms,
        })
    }

    /// Flat pullback along the projection dropping a fresh factor at
    /// position `pos`: inserts a fundamental singleton into every term.
    pub fn pullback_insert(&self, pos: usize) -> Result<TautClass, Error> {
        if pos > self.arity {
            return Err(Error::shape(format!(
                "cannot insert factor at {pos} on X^{}",
                self.arity
            )));
        }
        let mut terms: HashMap<Part, Q> = HashMap::new();
        for (p, c) in &self.terms {
            add_term(&mut terms, p.insert(pos), c.clone());
        }
        Ok(TautClass {
            model: self.model.clone(),
            arity: self.arity + 1,
            terms,
        })
    }

    /// Applies a position permutation to every term.
    pub fn permute(&self, perm: &[usize]) -> TautClass {
        let mut terms: HashMap<Part, Q> = HashMap::new();
        for (p, c) in &self.terms {
            add_term(&mut terms, p.permute(perm), c.clone());
        }
        TautClass {
            model: self.model.clone(),
            arity: self.arity,
            terms,
        }
    }

    /// Splits into homogeneous components keyed by codimension.
    pub fn codim_components(&self) -> BTreeMap<usize, TautClass> {
        let mut out: BTreeMap<usize, TautClass> = BTreeMap::new();
        for (p, c) in &self.terms {
            let entry = out
                .entry(p.codim())
                .or_insert_with(|| TautClass::zero(self.model.clone(), self.arity));
            add_term(&mut entry.terms, p.clone(), c.clone());
        }
        out
    }

    /// The codimension when homogeneous.
    pub fn codim(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|p| p.codim());
        let first = it.next()?;
        if it.all(|c| c == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.sorted_terms().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Generator builders
// ---------------------------------------------------------------------------

/// `c_X` pulled back from factor `t`.
pub fn point(model: Arc<SurfaceModel>, arity: usize, t: usize) -> TautClass {
    let part = Part::from_blocks(arity, &[(smallvec![t as u8], Dec::Pt)]);
    TautClass::from_term(model, part, q(1))
}

/// A formal point `[x_id]` on factor `t`.
pub fn formal_point(model: Arc<SurfaceModel>, arity: usize, t: usize, id: u32) -> TautClass {
    let part = Part::from_blocks(arity, &[(smallvec![t as u8], Dec::FormalPt(id))]);
    TautClass::from_term(model, part, q(1))
}

/// The basis divisor `D_j` on factor `t`.
pub fn divisor_basis(
    model: Arc<SurfaceModel>,
    arity: usize,
    t: usize,
    j: usize,
) -> Result<TautClass, Error> {
    if j >= model.ns_rank() {
        return Err(Error::invalid_factor(format!("no basis divisor {j}")));
    }
    let part = Part::from_blocks(arity, &[(smallvec![t as u8], Dec::Div(j as u16))]);
    Ok(TautClass::from_term(model, part, q(1)))
}

/// An arbitrary divisor class on factor `t`, expanded over the NS basis.
pub fn divisor(
    model: Arc<SurfaceModel>,
    arity: usize,
    t: usize,
    class: &DivisorClass,
) -> Result<TautClass, Error> {
    let mut out = TautClass::zero(model.clone(), arity);
    for (j, coeff) in class.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let g = divisor_basis(model.clone(), arity, t, j)?.scale(coeff);
        out = out.add(&g)?;
    }
    Ok(out)
}

/// The diagonal class of factors `r != s`.
pub fn diagonal(
    model: Arc<SurfaceModel>,
    arity: usize,
    r: usize,
    s: usize,
) -> Result<TautClass, Error> {
    if r == s || r >= arity || s >= arity {
        return Err(Error::invalid_factor(format!(
            "diagonal needs two distinct factors in range, got ({r},{s}) on X^{arity}"
        )));
    }
    let part = Part::from_blocks(arity, &[(smallvec![r as u8, s as u8], Dec::Fund)]);
    Ok(TautClass::from_term(model, part, q(1)))
}

/// The normalized diagonal of `(r, s)`: the diagonal minus `c_X` on the
/// second factor.
pub fn normalized_diagonal(
    model: Arc<SurfaceModel>,
    arity: usize,
    r: usize,
    s: usize,
) -> Result<TautClass, Error> {
    let d = diagonal(model.clone(), arity, r, s)?;
    let c = point(model, arity, s);
    d.sub(&c)
}

/// Degree-`i` Chern character component of the structure sheaf of the
/// normalized diagonal on factors `(r, s)`: degree 2 is the normalized
/// diagonal itself, degree 4 is `-2 c_X x c_X`, everything else vanishes.
pub fn ch_o_diagonal_bar(
    model: Arc<SurfaceModel>,
    arity: usize,
    r: usize,
    s: usize,
    i: usize,
) -> Result<TautClass, Error> {
    if r == s {
        return Err(Error::invalid_factor(format!(
            "normalized diagonal needs distinct factors, got ({r},{s})"
        )));
    }
    match i {
        2 => normalized_diagonal(model, arity, r, s),
        4 => {
            let c = point(model.clone(), arity, r).mul(&point(model.clone(), arity, s))?;
            Ok(c.scale(&-q(2)))
        }
        _ => Ok(TautClass::zero(model, arity)),
    }
}

/// The modified diagonal cycle on `X^s`: the alternating sum over how many
/// factors are pinned to `c_X`, the remaining factors carrying the small
/// diagonal.
pub fn modified_diagonal(model: Arc<SurfaceModel>, s: usize) -> Result<TautClass, Error> {
    if s < 2 {
        return Err(Error::input(format!(
            "modified diagonal needs at least two factors, got {s}"
        )));
    }
    let mut out = TautClass::zero(model.clone(), s);
    for mask in 0..(1u32 << s) {
        let pinned: Vec<u8> = (0..s as u8).filter(|&p| mask & (1 << p) != 0).collect();
        if pinned.len() == s {
            continue; // the small diagonal must sit on at least one factor
        }
        let moving: smallvec::SmallVec<[u8; 12]> =
            (0..s as u8).filter(|p| !pinned.contains(p)).collect();
        let mut blocks: Vec<(smallvec::SmallVec<[u8; 12]>, Dec)> =
            vec![(moving, Dec::Fund)];
        for p in &pinned {
            blocks.push((smallvec![*p], Dec::Pt));
        }
        let raw = RawTerm::from_blocks(s, &blocks);
        let sign = if pinned.len() % 2 == 0 { q(1) } else { -q(1) };
        for (part, c) in raw.normalize(&model) {
            add_term(&mut out.terms, part, &sign * c);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The fundamental identity classes
// ---------------------------------------------------------------------------

/// `Δ̄01·Δ̄02·Δ̄03` on `X^4` — the triple product whose vanishing is the
/// Beauville-Voisin identity in product form.
pub fn bv_product(model: Arc<SurfaceModel>) -> TautClass {
    let d1 = normalized_diagonal(model.clone(), 4, 0, 1).unwrap();
    let d2 = normalized_diagonal(model.clone(), 4, 0, 2).unwrap();
    let d3 = normalized_diagonal(model, 4, 0, 3).unwrap();
    d1.mul(&d2).unwrap().mul(&d3).unwrap()
}

/// `Δ - Δ_c + Δ_{c,c}` on `X^3` — the classical form of the identity.
pub fn bv0_sum(model: Arc<SurfaceModel>) -> TautClass {
    modified_diagonal(model, 3).unwrap()
}

/// `D_j^(0)·Δ̄01·Δ̄02` on `X^3`.
pub fn second_product(model: Arc<SurfaceModel>, j: usize) -> Result<TautClass, Error> {
    let d = divisor_basis(model.clone(), 3, 0, j)?;
    let d1 = normalized_diagonal(model.clone(), 3, 0, 1)?;
    let d2 = normalized_diagonal(model, 3, 0, 2)?;
    d.mul(&d1)?.mul(&d2)
}

/// `c_X^(0)·Δ̄01` on `X^2`.
pub fn third_product(model: Arc<SurfaceModel>) -> TautClass {
    let c = point(model.clone(), 2, 0);
    let d = normalized_diagonal(model, 2, 0, 1).unwrap();
    c.mul(&d).unwrap()
}

/// The full Chern character of the triple product of normalized-diagonal
/// structure sheaves on `X^4` (all graded pieces summed). Its vanishing is
/// the K-theoretic triple-product identity at character level.
pub fn k_ideal_ch_product(model: Arc<SurfaceModel>) -> TautClass {
    let mut acc = TautClass::one(model.clone(), 4);
    for t in 1..=3usize {
        let ch2 = ch_o_diagonal_bar(model.clone(), 4, 0, t, 2).unwrap();
        let ch4 = ch_o_diagonal_bar(model.clone(), 4, 0, t, 4).unwrap();
        let factor = ch2.add(&ch4).unwrap();
        acc = acc.mul(&factor).unwrap();
    }
    acc
}

// ---------------------------------------------------------------------------
// Raw sums (no identity rewrites) — used by the equivalence checks
// ---------------------------------------------------------------------------

/// A linear combination of raw terms. Products merge blocks and track excess
/// but never rewrite oversize blocks, so a raw sum records the unreduced
/// shape of a product of diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSum {
    pub arity: usize,
    pub terms: BTreeMap<RawTerm, Q>,
}

impl RawSum {
    pub fn zero(arity: usize) -> RawSum {
        RawSum {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(arity: usize, terms: Vec<(RawTerm, Q)>) -> RawSum {
        let mut out = RawSum::zero(arity);
        for (t, c) in terms {
            out.push(t, c);
        }
        out
    }

    fn push(&mut self, term: RawTerm, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(term).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn normalized_diagonal(arity: usize, r: usize, s: usize) -> RawSum {
        let d = RawTerm::from_blocks(arity, &[(smallvec![r as u8, s as u8], Dec::Fund)]);
        let c = RawTerm::from_blocks(arity, &[(smallvec![s as u8], Dec::Pt)]);
        RawSum::from_terms(arity, vec![(d, q(1)), (c, -q(1))])
    }

    /// The modified diagonal as a raw sum: small diagonals left unexpanded.
    pub fn modified_diagonal(arity: usize) -> RawSum {
        let mut out = RawSum::zero(arity);
        for mask in 0..(1u32 << arity) {
            let pinned: Vec<u8> = (0..arity as u8).filter(|&p| mask & (1 << p) != 0).collect();
            if pinned.len() == arity {
                continue;
            }
            let moving: smallvec::SmallVec<[u8; 12]> =
                (0..arity as u8).filter(|p| !pinned.contains(p)).collect();
            let mut blocks: Vec<(smallvec::SmallVec<[u8; 12]>, Dec)> =
                vec![(moving, Dec::Fund)];
            for p in &pinned {
                blocks.push((smallvec![*p], Dec::Pt));
            }
            let sign = if pinned.len() % 2 == 0 { q(1) } else { -q(1) };
            out.push(RawTerm::from_blocks(arity, &blocks), sign);
        }
        out
    }

    pub fn mul(&self, other: &RawSum, model: &SurfaceModel) -> RawSum {
        let mut out = RawSum::zero(self.arity);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                if let Some((t, c)) = ta.mul(tb, model) {
                    out.push(t, ca * cb * c);
                }
            }
        }
        out
    }

    pub fn forget(&self, pos: usize) -> RawSum {
        let mut out = RawSum::zero(self.arity - 1);
        for (t, c) in &self.terms {
            if let Some(nt) = t.forget(pos) {
                out.push(nt, c.clone());
            }
        }
        out
    }

    pub fn normalize(&self, model: &Arc<SurfaceModel>) -> TautClass {
        let mut out = TautClass::zero(model.clone(), self.arity);
        for (t, c) in &self.terms {
            for (p, nc) in t.normalize(model) {
                add_term(&mut out.terms, p, c * nc);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_ratio;

    fn model() -> Arc<SurfaceModel> {
        SurfaceModel::default_model()
    }

    #[test]
    fn normalized_diagonal_orientation() {
        let m = model();
        let d01 = normalized_diagonal(m.clone(), 2, 0, 1).unwrap();
        let d10 = normalized_diagonal(m.clone(), 2, 1, 0).unwrap();
        // Both contain the plain diagonal; the point sits on the second
        // argument, so the two orientations differ.
        assert_ne!(d01, d10);
        let diff = d01.sub(&d10).unwrap();
        // Δ̄01 - Δ̄10 = c^(0) - c^(1).
        let expected = point(m.clone(), 2, 0).sub(&point(m, 2, 1)).unwrap();
        assert_eq!(diff, expected);
        assert!(normalized_diagonal(model(), 2, 0, 0).is_err());
    }

    #[test]
    fn diagonal_self_intersection() {
        // Δ12·Δ12 = 24 c^(1) c^(2) — the excess formula with c2(TX) = 24 c_X.
        let m = model();
        let d = diagonal(m.clone(), 2, 0, 1).unwrap();
        let sq = d.mul(&d).unwrap();
        let cc = point(m.clone(), 2, 0).mul(&point(m, 2, 1)).unwrap();
        assert_eq!(sq, cc.scale(&q(24)));
    }

    #[test]
    fn normalized_diagonal_square_is_22_points() {
        // Cross-check: Δ̄² = Δ² - 2Δ·(1 x c) = 24 cc - 2 cc = 22 cc.
        let m = model();
        let dbar = normalized_diagonal(m.clone(), 2, 0, 1).unwrap();
        let sq = dbar.mul(&dbar).unwrap();
        let cc = point(m.clone(), 2, 0).mul(&point(m, 2, 1)).unwrap();
        assert_eq!(sq, cc.scale(&q(22)));
        assert!(sq.sub(&cc.scale(&q(22))).unwrap().is_zero());
    }

    #[test]
    fn point_meets_diagonal() {
        // c^(1)·Δ12 = c^(1) c^(2).
        let m = model();
        let c = point(m.clone(), 2, 0);
        let d = diagonal(m.clone(), 2, 0, 1).unwrap();
        let prod = c.mul(&d).unwrap();
        let cc = point(m.clone(), 2, 0).mul(&point(m, 2, 1)).unwrap();
        assert_eq!(prod, cc);
    }

    #[test]
    fn fundamental_identities_reduce_to_zero() {
        let m = model();
        assert!(bv_product(m.clone()).is_zero());
        assert!(bv0_sum(m.clone()).is_zero());
        for j in 0..m.ns_rank() {
            assert!(second_product(m.clone(), j).unwrap().is_zero());
        }
        assert!(third_product(m.clone()).is_zero());
        assert!(k_ideal_ch_product(m).is_zero());
    }

    #[test]
    fn divisor_diagonal_product_splits() {
        // D^(0)·Δ01 = D x c + c x D.
        let m = model();
        let d = divisor_basis(m.clone(), 2, 0, 0).unwrap();
        let diag = diagonal(m.clone(), 2, 0, 1).unwrap();
        let prod = d.mul(&diag).unwrap();
        let dxc = divisor_basis(m.clone(), 2, 0, 0)
            .unwrap()
            .mul(&point(m.clone(), 2, 1))
            .unwrap();
        let cxd = point(m.clone(), 2, 0)
            .mul(&divisor_basis(m, 2, 1, 0).unwrap())
            .unwrap();
        assert_eq!(prod, dxc.add(&cxd).unwrap());
    }

    #[test]
    fn divisor_pairing_lands_on_points() {
        let m = model();
        let d0 = divisor_basis(m.clone(), 1, 0, 0).unwrap();
        let sq = d0.mul(&d0).unwrap();
        // <H, H> = 2 on the default model.
        let c = point(m, 1, 0);
        assert_eq!(sq, c.scale(&q(2)));
    }

    #[test]
    fn ch_of_diagonal_sheaf() {
        let m = model();
        let ch2 = ch_o_diagonal_bar(m.clone(), 2, 0, 1, 2).unwrap();
        assert_eq!(ch2, normalized_diagonal(m.clone(), 2, 0, 1).unwrap());
        assert!(ch_o_diagonal_bar(m.clone(), 2, 0, 1, 3).unwrap().is_zero());
        assert!(ch_o_diagonal_bar(m.clone(), 2, 0, 1, 0).unwrap().is_zero());
        let ch4 = ch_o_diagonal_bar(m.clone(), 2, 0, 1, 4).unwrap();
        let cc = point(m.clone(), 2, 0).mul(&point(m.clone(), 2, 1)).unwrap();
        assert_eq!(ch4, cc.scale(&-q(2)));
        assert!(ch_o_diagonal_bar(m, 2, 1, 1, 2).is_err());
    }

    #[test]
    fn forget_examples() {
        let m = model();
        // Forget the second factor of a diagonal: the fundamental class.
        let d = diagonal(m.clone(), 2, 0, 1).unwrap();
        assert_eq!(d.pushforward_forget(1).unwrap(), TautClass::one(m.clone(), 1));
        // Forget the first factor of c x c: degree 1 leaves c.
        let cc = point(m.clone(), 2, 0).mul(&point(m.clone(), 2, 1)).unwrap();
        assert_eq!(cc.pushforward_forget(0).unwrap(), point(m.clone(), 1, 0));
        // A divisor has no pushforward to a point.
        let dv = divisor_basis(m.clone(), 1, 0, 0).unwrap();
        assert!(dv.pushforward_forget(0).unwrap().is_zero());
        assert!(dv.pushforward_forget(3).is_err());
    }

    #[test]
    fn insert_examples() {
        let m = model();
        let d = diagonal(m.clone(), 2, 0, 1).unwrap();
        let ins = d.pullback_insert(2).unwrap();
        assert_eq!(ins, diagonal(m.clone(), 3, 0, 1).unwrap());
        let z = TautClass::zero(m.clone(), 2);
        assert!(z.pullback_insert(0).unwrap().is_zero());
        let c = point(m.clone(), 1, 0);
        let ci = c.pullback_insert(1).unwrap();
        assert_eq!(ci, point(m, 2, 0));
    }

    #[test]
    fn grading_is_additive_under_products() {
        let m = model();
        let a = normalized_diagonal(m.clone(), 3, 0, 1).unwrap(); // codim 2
        let b = divisor_basis(m.clone(), 3, 2, 0).unwrap(); // codim 1
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.codim(), Some(3));
    }

    #[test]
    fn scalar_field_is_exact() {
        let m = model();
        let c = point(m.clone(), 1, 0).scale(&q_ratio(1, 3));
        let three = c.scale(&q(3));
        assert_eq!(three, point(m, 1, 0));
    }

    #[test]
    fn raw_bv_pushforward_equals_modified_diagonal() {
        // Pushing the unreduced triple product of normalized diagonals along
        // "forget factor 0" gives exactly the modified-diagonal sum, term by
        // term: the two classical forms of the identity correspond.
        let m = model();
        let prod = RawSum::normalized_diagonal(4, 0, 1)
            .mul(&RawSum::normalized_diagonal(4, 0, 2), &m)
            .mul(&RawSum::normalized_diagonal(4, 0, 3), &m);
        let pushed = prod.forget(0);
        let gamma3 = RawSum::modified_diagonal(3);
        assert_eq!(pushed, gamma3);
        assert!(pushed.normalize(&m).is_zero());
    }
}
