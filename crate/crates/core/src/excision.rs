//! The excision procedure on one fundamental period: reduce every interval
//! `I_E` (tree nodes, plus the two pre-excised generators) modulo `a` into
//! the window `[0, a)`, keep the bookkeeping exact-ordered and disjoint, and
//! report remaining measure, s-dimensional sums, covering counts and the
//! partial sums of the length identity that the widths encode.

use std::cmp::Ordering;

use num::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fricke::GroupData;
use crate::mobius::Mobius;
use crate::quad::QuadVal;
use crate::scalar::Scalar;
use crate::shadow::{excision_interval, excision_width};
use crate::tree::{self, geodesic_data};

/// One reduced piece of an excised open interval. `lo`/`hi` are float
/// renderings; in exact sessions each endpoint also carries its exact
/// quadratic-surd form, which the disjointness certificate compares when two
/// endpoints agree beyond float resolution.
#[derive(Clone, Debug, Serialize)]
pub struct CoverInterval {
    pub lo: Scalar,
    pub hi: Scalar,
    /// Piece length, computed in a cancellation-free form (deep interval
    /// widths drop far below the spacing of their float endpoints).
    pub len: Scalar,
    /// Reduced center of the parent interval (pieces of a wrapped interval
    /// share it).
    pub center: Scalar,
    /// The anchoring gamma (the node's z value).
    pub z: Scalar,
    /// Excision stage: 0 for the two pre-excised generator intervals, tree
    /// depth + 1 for node intervals.
    pub label: u32,
    #[serde(skip)]
    lo_exact: Option<QuadVal>,
    #[serde(skip)]
    hi_exact: Option<QuadVal>,
}

impl CoverInterval {
    pub fn length(&self) -> Scalar {
        self.len.clone()
    }
}

/// Absolute float-comparison guard: differences below this fall through to
/// the exact comparator.
fn float_guard(a: &Scalar) -> Scalar {
    let p = cover_precision(a);
    let eps = Scalar::float_from_rational(
        &BigRational::new(1.into(), num::BigInt::from(2).pow((p - 48) as u32)),
        p,
    );
    a.to_float(p).mul(&eps)
}

fn cover_precision(a: &Scalar) -> usize {
    a.precision().unwrap_or(crate::scalar::DEFAULT_PRECISION)
}

/// Endpoint order with the exact fallback.
fn cmp_endpoints(
    fa: &Scalar,
    qa: &Option<QuadVal>,
    fb: &Scalar,
    qb: &Option<QuadVal>,
    guard: &Scalar,
) -> Ordering {
    let diff = fa.sub(fb);
    if diff.abs().gt(guard) {
        return if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        };
    }
    match (qa, qb) {
        (Some(x), Some(y)) => x.cmp(y),
        // Float sessions cannot separate endpoints this close; treat them
        // as tangent (open intervals may touch).
        _ => Ordering::Equal,
    }
}

/// The window `[0, a)` with its sorted, pairwise-disjoint excised pieces.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicCover {
    pub period: Scalar,
    pub base: Scalar,
    pub excised: Vec<CoverInterval>,
    pub depth: u32,
}

/// Window pieces of the interval `(c - hw, c + hw)` for the elliptic at raw
/// center `center` with anchor `z`, reduced mod `a`. Exact inputs also get
/// exact endpoint forms `c -+ a/2 +- (1/(2z)) sqrt(a^2 z^2 - 4)`.
fn pieces_for_item(
    center: &Scalar,
    z: &Scalar,
    label: u32,
    a: &Scalar,
) -> Result<Vec<CoverInterval>> {
    let p = cover_precision(a);
    let c = center.rem_euclid(a)?;
    let hw = excision_half_width_value(z, a)?;
    let c_f = c.to_float(p);
    let a_f = a.to_float(p);
    let lo_f = c_f.sub(&hw);
    let hi_f = c_f.add(&hw);
    let width = hw.mul(&Scalar::from_i64(2));

    // Exact endpoint descriptors (exact sessions only).
    let exacts = match (c.as_exact(), z.as_exact(), a.as_exact()) {
        (Some(cr), Some(zr), Some(ar)) => {
            let two = BigRational::from_integer(2.into());
            let half_a = ar / &two;
            let t = (&two * zr).recip(); // 1/(2z)
            let disc = ar * ar * zr * zr - BigRational::from_integer(4.into());
            let lo = QuadVal::new(cr - &half_a, t.clone(), disc.clone());
            let hi = QuadVal::new(cr + &half_a, -t, disc);
            Some((lo, hi))
        }
        _ => None,
    };

    let lo_neg = match &exacts {
        Some((lo, _)) => lo.sign() == Ordering::Less,
        None => lo_f.is_negative(),
    };
    let hi_over = match &exacts {
        Some((_, hi)) => hi.cmp(&QuadVal::rational(a.as_exact().unwrap().clone()))
            == Ordering::Greater,
        None => hi_f.gt(&a_f),
    };

    let zero = Scalar::zero();
    let mut out = Vec::with_capacity(2);
    if lo_neg {
        // Wraps below 0: pieces (lo + a, a) and (0, hi).
        out.push(CoverInterval {
            lo: lo_f.add(&a_f),
            hi: a_f.clone(),
            len: lo_f.neg(),
            center: c.clone(),
            z: z.clone(),
            label,
            lo_exact: exacts
                .as_ref()
                .map(|(lo, _)| lo.add_rational(a.as_exact().unwrap())),
            hi_exact: exacts
                .as_ref()
                .map(|_| QuadVal::rational(a.as_exact().unwrap().clone())),
        });
        out.push(CoverInterval {
            lo: zero.clone(),
            hi: hi_f,
            len: c_f.add(&hw),
            center: c,
            z: z.clone(),
            label,
            lo_exact: exacts.as_ref().map(|_| QuadVal::rational(BigRational::from_integer(0.into()))),
            hi_exact: exacts.map(|(_, hi)| hi),
        });
    } else if hi_over {
        out.push(CoverInterval {
            lo: lo_f,
            hi: a_f.clone(),
            len: a_f.sub(&c_f).add(&hw),
            center: c.clone(),
            z: z.clone(),
            label,
            lo_exact: exacts.as_ref().map(|(lo, _)| lo.clone()),
            hi_exact: exacts
                .as_ref()
                .map(|_| QuadVal::rational(a.as_exact().unwrap().clone())),
        });
        out.push(CoverInterval {
            lo: zero.clone(),
            hi: hi_f.sub(&a_f),
            len: c_f.add(&hw).sub(&a_f),
            center: c,
            z: z.clone(),
            label,
            lo_exact: exacts.as_ref().map(|_| QuadVal::rational(BigRational::from_integer(0.into()))),
            hi_exact: exacts.map(|(_, hi)| hi.add_rational(&(-a.as_exact().unwrap().clone()))),
        });
    } else {
        out.push(CoverInterval {
            lo: lo_f,
            hi: hi_f,
            len: width,
            center: c,
            z: z.clone(),
            label,
            lo_exact: exacts.as_ref().map(|(lo, _)| lo.clone()),
            hi_exact: exacts.map(|(_, hi)| hi),
        });
    }
    Ok(out)
}

/// Half-width `a/2 - sqrt(a^2/4 - 1/z^2)` in the cancellation-free form.
fn excision_half_width_value(z: &Scalar, a: &Scalar) -> Result<Scalar> {
    let p = cover_precision(a);
    let zf = z.to_float(p);
    let af = a.to_float(p);
    let inv_z2 = zf.mul(&zf).recip()?;
    let quarter = af.mul(&af).div(&Scalar::from_i64(4))?;
    let r2 = quarter.sub(&inv_z2);
    if !r2.is_positive() {
        return Err(Error::NotHyperbolic);
    }
    inv_z2.div(&af.div(&Scalar::from_i64(2))?.add(&r2.sqrt()?))
}

fn assemble(pieces: Vec<CoverInterval>, a: &Scalar, depth: u32) -> Result<PeriodicCover> {
    let guard = float_guard(a);
    let tol = a.to_float(cover_precision(a)).tolerance();
    let mut excised = pieces;
    excised.sort_by(|p, q| cmp_endpoints(&p.lo, &p.lo_exact, &q.lo, &q.lo_exact, &guard));
    for w in excised.windows(2) {
        // Open intervals: touching endpoints are still disjoint.
        let order = cmp_endpoints(&w[0].hi, &w[0].hi_exact, &w[1].lo, &w[1].lo_exact, &guard);
        let overlap_beyond_tolerance = match (&w[0].hi_exact, &w[1].lo_exact) {
            // Exact data: any strict overlap is a violation.
            (Some(_), Some(_)) => order == Ordering::Greater,
            // Float data: flag overlaps beyond the comparison tolerance.
            _ => w[0].hi.sub(&w[1].lo).gt(&tol),
        };
        if overlap_beyond_tolerance {
            return Err(Error::ExcisionOverlap {
                a_lo: w[0].lo.to_wire(),
                a_hi: w[0].hi.to_wire(),
                b_lo: w[1].lo.to_wire(),
                b_hi: w[1].hi.to_wire(),
            });
        }
    }
    Ok(PeriodicCover {
        period: a.clone(),
        base: Scalar::zero(),
        excised,
        depth,
    })
}

/// Raw (label, center, z) items for the cover to `depth`: `I_{T1}` and
/// `I_{T2}` first, then `I_E` over the tree via the fixed-point recursion.
fn cover_items(group: &GroupData, depth: u32) -> Result<Vec<(u32, Scalar, Scalar)>> {
    let a = &group.triple.a;
    let mut items = Vec::new();
    for t in [&group.t1, &group.t2] {
        let i = excision_interval(t, a)?;
        items.push((0, i.center, i.gamma));
    }
    tree::visit_cover_data(group, depth, &mut |d, center, z| {
        items.push((d + 1, center.clone(), z.clone()));
    });
    Ok(items)
}

/// Lambda/rho depth of a node within its subtree (the joining nu edge does
/// not count).
fn node_depth(node: &tree::TreeNode) -> u32 {
    let skip = usize::from(node.path.first() == Some(&tree::Move::Nu));
    (node.path.len() - skip) as u32
}

/// Builds the periodic cover for the tree to `depth`.
pub fn build_excision(group: &GroupData, depth: u32) -> Result<PeriodicCover> {
    let a = &group.triple.a;
    let mut pieces = Vec::new();
    for (label, center, z) in cover_items(group, depth)? {
        pieces.extend(pieces_for_item(&center, &z, label, a)?);
    }
    assemble(pieces, a, depth)
}

/// Closed complement pieces of the excised set within `[0, a]`, rendered
/// from the float endpoints. Gaps narrower than float resolution are
/// reported as empty and skipped.
pub fn remaining(cover: &PeriodicCover) -> Vec<(Scalar, Scalar)> {
    let mut out = Vec::with_capacity(cover.excised.len() + 1);
    let mut cursor = cover.base.clone();
    for piece in &cover.excised {
        if piece.lo.gt(&cursor) {
            out.push((cursor.clone(), piece.lo.clone()));
        }
        if piece.hi.gt(&cursor) {
            cursor = piece.hi.clone();
        }
    }
    if cover.period.gt(&cursor) {
        out.push((cursor, cover.period.clone()));
    }
    out
}

/// Total remaining length `L_d = a - sum(widths)`. Certified disjointness
/// makes the excised measure the plain width sum; each width is evaluated
/// independently in a cancellation-free form, so no nearby-endpoint
/// subtraction pollutes the total.
pub fn remaining_length(cover: &PeriodicCover) -> Scalar {
    let total = cover
        .excised
        .iter()
        .fold(Scalar::zero(), |acc, p| acc.add(&p.len));
    cover.period.sub(&total)
}

/// `sum(len_i^s)` over the remaining intervals, `0 < s <= 1`.
pub fn s_sum(cover: &PeriodicCover, s: &Scalar) -> Result<Scalar> {
    if !s.is_positive() || s.gt(&Scalar::one()) {
        return Err(Error::InvalidInput("s must lie in (0, 1]".into()));
    }
    if s.sub(&Scalar::one()).is_zero() {
        return Ok(remaining_length(cover));
    }
    let mut acc = Scalar::zero();
    for (lo, hi) in remaining(cover) {
        let len = hi.sub(&lo);
        if len.is_positive() {
            acc = acc.add(&len.powf(s)?);
        }
    }
    Ok(acc)
}

/// Covering count `N(eps) = sum(ceil(len_i / eps))` over remaining pieces.
pub fn n_eps(cover: &PeriodicCover, eps: &Scalar) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let mut n = 0u64;
    for (lo, hi) in remaining(cover) {
        let ratio = hi.sub(&lo).div(eps)?;
        let fl = ratio.floor();
        let count = fl.to_f64() as u64;
        n += if ratio.sub(&fl).is_zero() { count } else { count + 1 };
    }
    Ok(n)
}

/// One McShane-style term `1/(1 + e^l)` for the geodesic of `z`.
fn identity_term(z: &Scalar, a: &Scalar) -> Result<Scalar> {
    let data = geodesic_data(z, a)?;
    Scalar::one().div(&Scalar::one().add(&data.length.exp()))
}

/// Term cache keyed by the exact wire form of `z`; equal z-values share one
/// transcendental evaluation (tree z-values repeat with multiplicity).
struct TermCache {
    map: std::collections::BTreeMap<String, Scalar>,
}

impl TermCache {
    fn new() -> TermCache {
        TermCache {
            map: std::collections::BTreeMap::new(),
        }
    }

    fn term(&mut self, z: &Scalar, a: &Scalar) -> Result<Scalar> {
        let key = z.to_wire();
        if let Some(t) = self.map.get(&key) {
            return Ok(t.clone());
        }
        let t = identity_term(z, a)?;
        self.map.insert(key, t.clone());
        Ok(t)
    }
}

/// Partial sum `S_d` of `1/(1 + e^l)` over the two exceptional geodesics and
/// every tree node to `depth`.
pub fn mcshane_partial_sum(group: &GroupData, depth: u32) -> Result<Scalar> {
    let rows = mcshane_terms(group, depth)?;
    Ok(rows
        .into_iter()
        .fold(Scalar::zero(), |acc, (_, t)| acc.add(&t)))
}

/// `(node depth, term)` pairs in canonical order; the two exceptional
/// geodesics carry depth 0.
fn mcshane_terms(group: &GroupData, depth: u32) -> Result<Vec<(u32, Scalar)>> {
    let a = &group.triple.a;
    let mut cache = TermCache::new();
    let mut rows = Vec::new();
    for (_, z) in tree::exceptional_geodesics(group) {
        rows.push((0, cache.term(&z, a)?));
    }
    let mut err = None;
    tree::visit_heights(group, depth, &mut |d, _, _, z| {
        if err.is_some() {
            return;
        }
        match cache.term(z, a) {
            Ok(t) => rows.push((d, t)),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(rows)
}

/// Partial sums `S_d` for `d = 0..=depth`, one transcendental pass.
pub fn mcshane_table(group: &GroupData, depth: u32) -> Result<Vec<(u32, Scalar)>> {
    let terms = mcshane_terms(group, depth)?;
    let mut out = Vec::with_capacity(depth as usize + 1);
    for d in 0..=depth {
        let s_d = terms
            .iter()
            .filter(|(td, _)| *td <= d)
            .fold(Scalar::zero(), |acc, (_, t)| acc.add(t));
        out.push((d, s_d));
    }
    Ok(out)
}

/// Per-depth measure table row.
#[derive(Clone, Debug, Serialize)]
pub struct DepthRow {
    pub depth: u32,
    pub intervals: usize,
    pub remaining_len: Scalar,
    pub mcshane_sum: Scalar,
    pub s_sum_half: Scalar,
    pub s_sum_quarter: Scalar,
    pub s_sum_tenth: Scalar,
    /// `|L_d - a (1 - 2 S_d)|`.
    pub identity_residual: Scalar,
    pub identity_ok: bool,
}

/// `(N(eps), eps)` covering-count row.
#[derive(Clone, Debug, Serialize)]
pub struct EpsRow {
    pub eps: Scalar,
    pub count: u64,
}

/// Builds the depth-indexed table `d = 0..=depth` in one enumeration pass.
///
/// The full-depth piece list is sorted and disjointness-checked once; every
/// shallower cover is a label-filtered subsequence, so its gaps come from a
/// linear pass. The three s-sum trend columns are computed in double
/// precision (they are decade-scale trend indicators, not certificates).
pub fn depth_table(group: &GroupData, depth: u32, tol: &Scalar) -> Result<Vec<DepthRow>> {
    let a = &group.triple.a;
    let cover = build_excision(group, depth)?;
    let terms = mcshane_terms(group, depth)?;

    // Cumulative McShane sums per depth.
    let mut s_by_depth = vec![Scalar::zero(); depth as usize + 1];
    for (td, t) in &terms {
        let d = *td as usize;
        s_by_depth[d] = s_by_depth[d].add(t);
    }
    for d in 1..s_by_depth.len() {
        s_by_depth[d] = s_by_depth[d].add(&s_by_depth[d - 1].clone());
    }

    let mut rows = Vec::with_capacity(depth as usize + 1);
    for d in 0..=depth {
        let mut excised_total = Scalar::zero();
        let mut count = 0usize;
        let (mut sum_half, mut sum_quarter, mut sum_tenth) = (0f64, 0f64, 0f64);
        let mut cursor = cover.base.clone();
        let mut gap = |lo: &Scalar, cursor: &Scalar| {
            if lo.gt(cursor) {
                let lf = lo.sub(cursor).to_f64();
                if lf > 0.0 {
                    sum_half += lf.sqrt();
                    sum_quarter += lf.powf(0.25);
                    sum_tenth += lf.powf(0.1);
                }
            }
        };
        for piece in cover.excised.iter().filter(|p| p.label <= d + 1) {
            count += 1;
            excised_total = excised_total.add(&piece.len);
            gap(&piece.lo, &cursor);
            if piece.hi.gt(&cursor) {
                cursor = piece.hi.clone();
            }
        }
        gap(&cover.period.clone(), &cursor);
        drop(gap);
        let l_d = a.to_float(cover_precision(a)).sub(&excised_total);

        let s_d = s_by_depth[d as usize].clone();
        let identity_residual = l_d
            .sub(&a.mul(&Scalar::one().sub(&Scalar::from_i64(2).mul(&s_d))))
            .abs();
        let dec = |v: f64| {
            Scalar::float_from_decimal(&format!("{v:.17e}"), 64)
                .unwrap_or_else(|_| Scalar::zero())
        };
        rows.push(DepthRow {
            depth: d,
            intervals: count,
            remaining_len: l_d,
            mcshane_sum: s_d,
            s_sum_half: dec(sum_half),
            s_sum_quarter: dec(sum_quarter),
            s_sum_tenth: dec(sum_tenth),
            identity_ok: identity_residual.le(tol),
            identity_residual,
        });
    }
    Ok(rows)
}

/// Covering-count table for the final cover, on a dyadic epsilon grid.
pub fn eps_table(cover: &PeriodicCover, exponents: &[u32]) -> Result<Vec<EpsRow>> {
    let mut rows = Vec::with_capacity(exponents.len());
    for &e in exponents {
        let eps = cover
            .period
            .div(&Scalar::from_i64(1i64 << e))?;
        rows.push(EpsRow {
            count: n_eps(cover, &eps)?,
            eps,
        });
    }
    Ok(rows)
}

/// Per-node check that the excision width matches the identity term:
/// `w_a(z) = 2a / (1 + e^l)`.
pub fn width_identity_residual(z: &Scalar, a: &Scalar) -> Result<Scalar> {
    let w = excision_width(z, a)?;
    let rhs = Scalar::from_i64(2).mul(a).mul(&identity_term(z, a)?);
    Ok(w.sub(&rhs).abs())
}

/// Flanking and ambient-interval checks for every non-root node.
#[derive(Clone, Debug, Serialize)]
pub struct OrderingReport {
    pub nodes_checked: usize,
    pub violations: Vec<String>,
}

impl OrderingReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each non-root node (E, F, G), checks that `I_E` sits inside the gap
/// between `I_{S^-a G S^a}` and `I_F`, that the gap length matches
/// `F(inf) + r_a(y) - (G(inf) - r_a(x))`, that `w_a(z)` fits the gap, and
/// that both flanking intervals were excised at a strictly smaller stage.
pub fn ordering_checks(group: &GroupData, depth: u32) -> Result<OrderingReport> {
    let a = group.triple.a.clone();
    let s_inv = group.s_a.inv();
    let tol = tolerance_for(&a);

    // Reduced (center, z, label) catalogue of excised intervals.
    let items = cover_items(group, depth)?;
    let mut catalogue: Vec<(Scalar, Scalar, u32)> = Vec::with_capacity(items.len());
    for (label, center, z) in &items {
        catalogue.push((center.rem_euclid(&a)?, z.clone(), *label));
    }

    let mut nodes = Vec::new();
    tree::visit(group, depth, &mut |n| nodes.push(n.clone()))?;

    let mut violations = Vec::new();
    let mut checked = 0usize;
    for node in nodes.iter().filter(|n| !n.path.is_empty()) {
        checked += 1;
        let label = node_depth(node) + 1;
        let tag = tree::path_string(&node.path);
        if let Err(msg) = check_node(node, &s_inv, &a, &catalogue, label, &tol) {
            violations.push(format!("{tag}: {msg}"));
        }
    }
    Ok(OrderingReport {
        nodes_checked: checked,
        violations,
    })
}

fn tolerance_for(a: &Scalar) -> Scalar {
    let probe = a.to_float(a.precision().unwrap_or(crate::scalar::DEFAULT_PRECISION));
    probe.tolerance()
}

fn check_node(
    node: &tree::TreeNode,
    s_inv: &Mobius,
    a: &Scalar,
    catalogue: &[(Scalar, Scalar, u32)],
    label: u32,
    tol: &Scalar,
) -> std::result::Result<(), String> {
    let fmt = |e: Error| e.to_string();
    let i_e = excision_interval(&node.e, a).map_err(fmt)?;
    let i_f = excision_interval(&node.f, a).map_err(fmt)?;
    let g_tr = node.g.conjugate(s_inv); // S^-a G S^a
    let i_g = excision_interval(&g_tr, a).map_err(fmt)?;

    let (left, right) = if i_g.center.le(&i_f.center) {
        (&i_g, &i_f)
    } else {
        (&i_f, &i_g)
    };

    // (i) betweenness inside the gap.
    let slack = tol.clone();
    if left.hi().gt(&i_e.lo().add(&slack)) || i_e.hi().gt(&right.lo().add(&slack)) {
        return Err(format!(
            "I_E ({}, {}) escapes the flank gap ({}, {})",
            i_e.lo().to_wire(),
            i_e.hi().to_wire(),
            left.hi().to_wire(),
            right.lo().to_wire()
        ));
    }

    // (ii) the ambient gap length equals F(inf) + r_a(y) - (G(inf) - r_a(x)),
    // and the excised width fits inside it.
    let gap = right.lo().sub(&left.hi());
    let r = |v: &Scalar| -> std::result::Result<Scalar, String> {
        a.mul(a)
            .div(&Scalar::from_i64(4))
            .and_then(|q| q.sub(&v.mul(v).recip()?).sqrt())
            .map_err(fmt)
    };
    let f_inf = node.f.alpha().div(node.f.gamma()).map_err(fmt)?;
    let g_inf = node.g.alpha().div(node.g.gamma()).map_err(fmt)?;
    let ambient = f_inf
        .add(&r(&node.y)?)
        .sub(&g_inf.sub(&r(&node.x)?));
    if ambient.sub(&gap).abs().gt(&tol.mul(&Scalar::from_i64(16))) {
        return Err(format!(
            "ambient length {} differs from flank gap {}",
            ambient.to_wire(),
            gap.to_wire()
        ));
    }
    let w = i_e.width();
    if w.gt(&ambient.add(tol)) {
        return Err(format!(
            "width {} exceeds ambient {}",
            w.to_wire(),
            ambient.to_wire()
        ));
    }

    // (iii) both flanks already excised at a strictly smaller stage.
    for (name, flank) in [("F", &i_f), ("S^-aGS^a", &i_g)] {
        let c = flank
            .center
            .rem_euclid(a)
            .map_err(|e| e.to_string())?;
        let hit = catalogue.iter().find(|(cc, zz, ll)| {
            *ll < label && cc.sub(&c).abs().le(tol) && zz.sub(&flank.gamma).abs().le(tol)
        });
        if hit.is_none() {
            return Err(format!(
                "flank {name} at reduced center {} (z = {}) not excised earlier",
                c.to_wire(),
                flank.gamma.to_wire()
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fricke::{build_group, FrickeTriple};

    fn modular() -> GroupData {
        build_group(FrickeTriple::modular()).unwrap()
    }

    #[test]
    fn depth_zero_cover_contents() {
        // Dumped from the excision intervals: three width-(3 - sqrt 5)
        // intervals at reduced centers 0, 1, 2 (z = 1: I_{T1}, I_{T2} and the
        // root's I_{T0}) plus the nu-root interval of width 3 - sqrt 8 at
        // center 3/2. The piece at center 0 wraps into two pieces.
        let g = modular();
        let cover = build_excision(&g, 0).unwrap();
        assert_eq!(cover.excised.len(), 5);
        let w1 = 3.0 - 5.0_f64.sqrt();
        let w2 = 3.0 - 8.0_f64.sqrt();
        let total: f64 = cover
            .excised
            .iter()
            .map(|p| p.length().to_f64())
            .sum();
        assert!((total - (3.0 * w1 + w2)).abs() < 1e-12);
        // Remaining length L_0 = 3 - 3(3 - sqrt5) - (3 - sqrt8)
        //                      = 3 sqrt5 + 2 sqrt2 - 9.
        let l0 = remaining_length(&cover);
        assert!((l0.to_f64() - 0.5366310572455591868).abs() < 1e-12);
        // Telescoping: excised + remaining = a, up to float rounding.
        assert!((total + l0.to_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn remaining_of_empty_and_full() {
        let a = Scalar::from_i64(3);
        let empty = PeriodicCover {
            period: a.clone(),
            base: Scalar::zero(),
            excised: vec![],
            depth: 0,
        };
        assert!(remaining_length(&empty).sub(&a).is_zero());
        let full = PeriodicCover {
            period: a.clone(),
            base: Scalar::zero(),
            excised: vec![CoverInterval {
                lo: Scalar::zero(),
                hi: a.clone(),
                len: a.clone(),
                center: Scalar::one(),
                z: Scalar::one(),
                label: 0,
                lo_exact: None,
                hi_exact: None,
            }],
            depth: 0,
        };
        assert!(remaining_length(&full).is_zero());
    }

    #[test]
    fn s_sum_basics() {
        let a = Scalar::from_i64(3);
        let cover = PeriodicCover {
            period: a.clone(),
            base: Scalar::zero(),
            excised: vec![CoverInterval {
                lo: Scalar::from_ratio(1, 4),
                hi: a.clone(),
                len: a.sub(&Scalar::from_ratio(1, 4)),
                center: Scalar::one(),
                z: Scalar::one(),
                label: 0,
                lo_exact: None,
                hi_exact: None,
            }],
            depth: 0,
        };
        // Single remaining interval of length 1/4: s = 1 gives 1/4,
        // s = 1/2 gives 1/2.
        assert!(s_sum(&cover, &Scalar::one())
            .unwrap()
            .sub(&Scalar::from_ratio(1, 4))
            .is_zero());
        let half = s_sum(&cover, &Scalar::from_ratio(1, 2)).unwrap();
        assert!((half.to_f64() - 0.5).abs() < 1e-30);
        assert!(s_sum(&cover, &Scalar::from_i64(2)).is_err());
    }

    #[test]
    fn overlap_detection() {
        let a = Scalar::from_i64(3);
        let mk = |lo: f64, hi: f64| CoverInterval {
            lo: Scalar::float_from_decimal(&lo.to_string(), 128).unwrap(),
            hi: Scalar::float_from_decimal(&hi.to_string(), 128).unwrap(),
            len: Scalar::float_from_decimal(&(hi - lo).to_string(), 128).unwrap(),
            center: Scalar::zero(),
            z: Scalar::one(),
            label: 0,
            lo_exact: Some(QuadVal::rational(num::BigRational::new(
                num::BigInt::from((lo * 1024.0) as i64),
                1024.into(),
            ))),
            hi_exact: Some(QuadVal::rational(num::BigRational::new(
                num::BigInt::from((hi * 1024.0) as i64),
                1024.into(),
            ))),
        };
        assert!(assemble(vec![mk(0.0, 1.0), mk(0.5, 2.0)], &a, 0).is_err());
        assert!(assemble(vec![mk(0.0, 1.0), mk(1.0, 2.0)], &a, 0).is_ok());
    }

    #[test]
    fn monotone_decreasing_remaining_length() {
        let g = modular();
        let tol = Scalar::float_from_decimal("1e-30", 256).unwrap();
        let rows = depth_table(&g, 6, &tol).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].remaining_len.lt(&w[0].remaining_len));
            assert!(w[1].mcshane_sum.gt(&w[0].mcshane_sum));
        }
        for row in &rows {
            assert!(row.identity_ok, "depth {}: residual {}", row.depth, row.identity_residual);
            assert!(row.mcshane_sum.lt(&Scalar::from_ratio(1, 2)));
        }
    }

    #[test]
    fn mcshane_first_terms() {
        let g = modular();
        // Depth 0: three z = 1 terms (two exceptional + root) and one z = 2.
        let s0 = mcshane_partial_sum(&g, 0).unwrap();
        assert!((s0.to_f64() - 0.4105614904590734688).abs() < 1e-15);
    }

    #[test]
    fn width_identity_per_node() {
        let a = Scalar::from_i64(3);
        for z in [1i64, 2, 5, 13, 29] {
            let r = width_identity_residual(&Scalar::from_i64(z), &a).unwrap();
            assert!(r.to_f64() < 1e-70, "z = {z}: {}", r.to_f64());
        }
    }

    #[test]
    fn ordering_checks_clean_to_depth_four() {
        let g = modular();
        let rep = ordering_checks(&g, 4).unwrap();
        assert_eq!(rep.nodes_checked, 2 * (2usize.pow(5) - 1) - 1);
        assert!(rep.clean(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn eps_table_counts() {
        let g = modular();
        let cover = build_excision(&g, 3).unwrap();
        let rows = eps_table(&cover, &[4, 8, 12]).unwrap();
        assert_eq!(rows.len(), 3);
        // Finer eps never decreases the count.
        assert!(rows[1].count >= rows[0].count);
        assert!(rows[2].count >= rows[1].count);
    }
}
