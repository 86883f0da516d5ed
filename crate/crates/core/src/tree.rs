//! The nu/lambda/rho moves on elliptic generator triples and the joined tree
//! they generate: one {lambda, rho}-tree over the root triple and one over
//! its nu-image, linked by a single nu edge.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fricke::GroupData;
use crate::mobius::Mobius;
use crate::scalar::Scalar;

/// Tree move letters, ordered nu < lambda < rho for canonical path order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    Nu,
    Lambda,
    Rho,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Nu => write!(f, "ν"),
            Move::Lambda => write!(f, "λ"),
            Move::Rho => write!(f, "ρ"),
        }
    }
}

/// Renders a path word, empty path as the root marker.
pub fn path_string(path: &[Move]) -> String {
    if path.is_empty() {
        return "ε".to_string();
    }
    path.iter().map(|m| m.to_string()).collect()
}

/// An ordered generator triple (E, F, G) with G F E = S^a projectively,
/// its path from the root, and the inverse heights (x, y, z) read off the
/// lower-left entries of G, F, E.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub e: Mobius,
    pub f: Mobius,
    pub g: Mobius,
    pub path: Vec<Move>,
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl TreeNode {
    fn from_triple(e: Mobius, f: Mobius, g: Mobius, path: Vec<Move>) -> TreeNode {
        let x = g.gamma().clone();
        let y = f.gamma().clone();
        let z = e.gamma().clone();
        TreeNode { e, f, g, path, x, y, z }
    }

    pub fn heights_inv(&self) -> (&Scalar, &Scalar, &Scalar) {
        (&self.x, &self.y, &self.z)
    }

    /// `x^2 + y^2 + z^2 - a x y z`, zero for a valid node.
    pub fn adjusted_residual(&self, a: &Scalar) -> Scalar {
        self.x
            .mul(&self.x)
            .add(&self.y.mul(&self.y))
            .add(&self.z.mul(&self.z))
            .sub(&a.mul(&self.x).mul(&self.y).mul(&self.z))
    }
}

/// The root node (T0, T1, T2).
pub fn root(group: &GroupData) -> TreeNode {
    TreeNode::from_triple(
        group.t0.clone(),
        group.t1.clone(),
        group.t2.clone(),
        Vec::new(),
    )
}

/// lambda: (E, F, G) -> (EFE, E, G).
pub fn move_lambda(node: &TreeNode) -> TreeNode {
    let e2 = node.e.mul(&node.f).mul(&node.e);
    let mut path = node.path.clone();
    path.push(Move::Lambda);
    TreeNode::from_triple(e2, node.e.clone(), node.g.clone(), path)
}

/// rho: (E, F, G) -> (FGF, F, S^a E S^-a).
pub fn move_rho(node: &TreeNode, s_a: &Mobius) -> TreeNode {
    let e2 = node.f.mul(&node.g).mul(&node.f);
    let g2 = node.e.conjugate(s_a);
    let mut path = node.path.clone();
    path.push(Move::Rho);
    TreeNode::from_triple(e2, node.f.clone(), g2, path)
}

/// nu: (E, F, G) -> (FEF, G, S^a F S^-a). Only the root takes a nu edge;
/// the joined tree has exactly one.
pub fn move_nu(node: &TreeNode, s_a: &Mobius) -> Result<TreeNode> {
    if !node.path.is_empty() {
        return Err(Error::NuNotAtRoot);
    }
    let e2 = node.f.mul(&node.e).mul(&node.f);
    let g2 = node.f.conjugate(s_a);
    let mut path = node.path.clone();
    path.push(Move::Nu);
    Ok(TreeNode::from_triple(e2, node.g.clone(), g2, path))
}

/// Visits the joined tree in canonical path-lexicographic order
/// (nu < lambda < rho): the root, the whole nu-subtree, then the lambda- and
/// rho-subtrees of the root. `depth` bounds the number of lambda/rho moves
/// within each of the two subtrees.
pub fn visit<F: FnMut(&TreeNode)>(group: &GroupData, depth: u32, f: &mut F) -> Result<()> {
    fn descend<F: FnMut(&TreeNode)>(node: &TreeNode, left: u32, s_a: &Mobius, f: &mut F) {
        f(node);
        if left == 0 {
            return;
        }
        descend(&move_lambda(node), left - 1, s_a, f);
        descend(&move_rho(node, s_a), left - 1, s_a, f);
    }

    let r = root(group);
    f(&r);
    let nu = move_nu(&r, &group.s_a)?;
    descend(&nu, depth, &group.s_a, f);
    if depth > 0 {
        descend(&move_lambda(&r), depth - 1, &group.s_a, f);
        descend(&move_rho(&r, &group.s_a), depth - 1, &group.s_a, f);
    }
    Ok(())
}

/// Collects the joined tree to `depth`; node count is `2 (2^(depth+1) - 1)`.
pub fn enumerate(group: &GroupData, depth: u32) -> Result<Vec<TreeNode>> {
    let mut out = Vec::new();
    visit(group, depth, &mut |n| out.push(n.clone()))?;
    Ok(out)
}

/// Streams only the inverse-height triples, in the same canonical order.
/// The recursions are the Vieta moves induced on (x, y, z) by lambda and rho;
/// they are cheaper than matrix products for deep measure sums.
pub fn visit_heights<F: FnMut(u32, &Scalar, &Scalar, &Scalar)>(
    group: &GroupData,
    depth: u32,
    f: &mut F,
) {
    let a = group.triple.a.clone();
    fn descend<F: FnMut(u32, &Scalar, &Scalar, &Scalar)>(
        x: &Scalar,
        y: &Scalar,
        z: &Scalar,
        d: u32,
        left: u32,
        a: &Scalar,
        f: &mut F,
    ) {
        f(d, x, y, z);
        if left == 0 {
            return;
        }
        // lambda: (x, z, a x z - y); rho: (z, y, a y z - x).
        let zl = a.mul(x).mul(z).sub(y);
        descend(x, z, &zl, d + 1, left - 1, a, f);
        let zr = a.mul(y).mul(z).sub(x);
        descend(z, y, &zr, d + 1, left - 1, a, f);
    }

    let x0 = group.t2.gamma().clone();
    let y0 = group.t1.gamma().clone();
    let z0 = group.t0.gamma().clone();
    f(0, &x0, &y0, &z0);
    // nu root: (y, x, a x y - z).
    let zn = a.mul(&x0).mul(&y0).sub(&z0);
    descend(&y0, &x0, &zn, 0, depth, &a, f);
    if depth > 0 {
        let zl = a.mul(&x0).mul(&z0).sub(&y0);
        descend(&x0, &z0, &zl, 1, depth - 1, &a, f);
        let zr = a.mul(&y0).mul(&z0).sub(&x0);
        descend(&z0, &y0, &zr, 1, depth - 1, &a, f);
    }
}

/// Streams `(depth, e_center, z)` per node without matrix products: an
/// order-two elliptic is determined by its fixed point `e` and lower-left
/// entry `gamma`, acting as `w -> e - 1/(gamma^2 (w - e))`. The moves then
/// update fixed-point x-coordinates directly:
///
/// * lambda: `e' = E(f)`, triple centers `(E(f), e, g)`;
/// * rho: `e' = F(g)`, centers `(F(g), f, e + a)`;
/// * nu (root): `e' = F(e)`, centers `(F(e), g, f + a)`.
///
/// Heights follow the same Vieta recursion as [`visit_heights`].
pub fn visit_cover_data<F: FnMut(u32, &Scalar, &Scalar)>(group: &GroupData, depth: u32, f: &mut F) {
    struct St {
        e: Scalar,
        f: Scalar,
        g: Scalar,
        x: Scalar,
        y: Scalar,
        z: Scalar,
    }

    // Real part of E(q) for E with center p, gamma gp, applied to the fixed
    // point of the elliptic with center q, gamma gq:
    // p - (1/gp^2) * (q - p) gq^2 / ((q - p)^2 gq^2 + 1).
    fn apply_center(p: &Scalar, gp: &Scalar, q: &Scalar, gq: &Scalar) -> Scalar {
        let delta = q.sub(p);
        let gq2 = gq.mul(gq);
        let num = delta.mul(&gq2);
        let den = delta.mul(&delta).mul(&gq2).add(&Scalar::one());
        let frac = num.div(&den).expect("positive denominator");
        p.sub(&frac.div(&gp.mul(gp)).expect("gamma nonzero"))
    }

    fn descend<F: FnMut(u32, &Scalar, &Scalar)>(
        st: &St,
        d: u32,
        left: u32,
        a: &Scalar,
        f: &mut F,
    ) {
        f(d, &st.e, &st.z);
        if left == 0 {
            return;
        }
        let lam = St {
            e: apply_center(&st.e, &st.z, &st.f, &st.y),
            f: st.e.clone(),
            g: st.g.clone(),
            x: st.x.clone(),
            y: st.z.clone(),
            z: a.mul(&st.x).mul(&st.z).sub(&st.y),
        };
        descend(&lam, d + 1, left - 1, a, f);
        let rho = St {
            e: apply_center(&st.f, &st.y, &st.g, &st.x),
            f: st.f.clone(),
            g: st.e.add(a),
            x: st.z.clone(),
            y: st.y.clone(),
            z: a.mul(&st.y).mul(&st.z).sub(&st.x),
        };
        descend(&rho, d + 1, left - 1, a, f);
    }

    let a = &group.triple.a;
    let e0 = group.t0.alpha().div(group.t0.gamma()).expect("gamma > 0");
    let f0 = group.t1.alpha().div(group.t1.gamma()).expect("gamma > 0");
    let g0 = group.t2.alpha().div(group.t2.gamma()).expect("gamma > 0");
    let root = St {
        e: e0,
        f: f0,
        g: g0,
        x: group.t2.gamma().clone(),
        y: group.t1.gamma().clone(),
        z: group.t0.gamma().clone(),
    };
    f(0, &root.e, &root.z);
    let nu = St {
        e: apply_center(&root.f, &root.y, &root.e, &root.z),
        f: root.g.clone(),
        g: root.f.add(a),
        x: root.y.clone(),
        y: root.x.clone(),
        z: a.mul(&root.x).mul(&root.y).sub(&root.z),
    };
    descend(&nu, 0, depth, a, f);
    if depth > 0 {
        let lam = St {
            e: apply_center(&root.e, &root.z, &root.f, &root.y),
            f: root.e.clone(),
            g: root.g.clone(),
            x: root.x.clone(),
            y: root.z.clone(),
            z: a.mul(&root.x).mul(&root.z).sub(&root.y),
        };
        descend(&lam, 1, depth - 1, a, f);
        let rho = St {
            e: apply_center(&root.f, &root.y, &root.g, &root.x),
            f: root.f.clone(),
            g: root.e.add(a),
            x: root.z.clone(),
            y: root.y.clone(),
            z: a.mul(&root.y).mul(&root.z).sub(&root.x),
        };
        descend(&rho, 1, depth - 1, a, f);
    }
}

/// The translation parameter and normalized matrices of Cor-style shapes
/// `E0 = [[0, *], [z, 0]]`, `E1 = [[x/z, *], [y, -x/z]]`,
/// `E2 = [[ax - y/z, *], [x, -(ax - y/z)]]`.
pub fn normal_form(node: &TreeNode) -> Result<(Scalar, Mobius, Mobius, Mobius)> {
    let t = node.e.alpha().div(node.e.gamma())?;
    let shift = Mobius::translation(&t.neg()); // z -> z - t
    let e0 = node.e.conjugate(&shift);
    let e1 = node.f.conjugate(&shift);
    let e2 = node.g.conjugate(&shift);
    Ok((t, e0, e1, e2))
}

/// Trace, length and peak height of the simple closed geodesic attached to a
/// node with largest inverse height `z`: trace `az`, length `2 acosh(az/2)`,
/// peak height `sqrt(a^2/4 - 1/z^2)`.
#[derive(Clone, Debug, Serialize)]
pub struct GeodesicData {
    pub trace: Scalar,
    pub length: Scalar,
    pub peak_height: Scalar,
}

pub fn geodesic_data(z: &Scalar, a: &Scalar) -> Result<GeodesicData> {
    let trace = a.mul(z);
    let two = Scalar::from_i64(2);
    if trace.le(&two) {
        return Err(Error::NotHyperbolic);
    }
    let half = trace.div(&two)?;
    let length = two.mul(&half.acosh()?);
    let peak = a
        .mul(a)
        .div(&Scalar::from_i64(4))?
        .sub(&z.mul(z).recip()?)
        .sqrt()?;
    Ok(GeodesicData {
        trace,
        length,
        peak_height: peak,
    })
}

/// The two exceptional geodesics: axes of `T1 S^-a` and `T2 S^-a`, with
/// z-values |trace|/a (that is b/a and 1).
pub fn exceptional_geodesics(group: &GroupData) -> [(Mobius, Scalar); 2] {
    let s_inv = group.s_a.inv();
    let m1 = group.t1.mul(&s_inv);
    let m2 = group.t2.mul(&s_inv);
    let z1 = m1.trace().abs().div(&group.triple.a).expect("a > 2");
    let z2 = m2.trace().abs().div(&group.triple.a).expect("a > 2");
    [(m1, z1), (m2, z2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fricke::{build_group, FrickeTriple};

    fn s(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }

    fn modular() -> GroupData {
        build_group(FrickeTriple::modular()).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mobius {
        Mobius::new(s(a), s(b), s(c), s(d)).unwrap()
    }

    fn assert_heights(n: &TreeNode, x: i64, y: i64, z: i64) {
        assert!(n.x.sub(&s(x)).is_zero(), "x = {} != {}", n.x, x);
        assert!(n.y.sub(&s(y)).is_zero(), "y = {} != {}", n.y, y);
        assert!(n.z.sub(&s(z)).is_zero(), "z = {} != {}", n.z, z);
    }

    #[test]
    fn lambda_of_modular_root() {
        let g = modular();
        let n = move_lambda(&root(&g));
        // Matrix-product oracle: T0 T1 T0 = [[1,1],[-2,-1]], canonical
        // [[-1,-1],[2,1]].
        assert!(n.e.approx_eq(&m(-1, -1, 2, 1)));
        assert!(n.f.approx_eq(&g.t0));
        assert!(n.g.approx_eq(&g.t2));
        assert_heights(&n, 1, 1, 2);
    }

    #[test]
    fn rho_of_modular_root() {
        let g = modular();
        let n = move_rho(&root(&g), &g.s_a);
        assert!(n.e.gamma().sub(&s(2)).is_zero());
        assert_heights(&n, 1, 1, 2);
    }

    #[test]
    fn nu_of_modular_root() {
        let g = modular();
        let n = move_nu(&root(&g), &g.s_a).unwrap();
        // T1 T0 T1 = [[-3,5],[-2,3]], canonical [[3,-5],[2,-3]].
        assert!(n.e.approx_eq(&m(3, -5, 2, -3)));
        assert!(n.z.sub(&s(2)).is_zero());
        // nu anywhere else is rejected.
        assert_eq!(move_nu(&n, &g.s_a).unwrap_err(), Error::NuNotAtRoot);
    }

    #[test]
    fn node_invariants_to_depth_five() {
        let g = modular();
        let a = &g.triple.a;
        let mut count = 0usize;
        visit(&g, 5, &mut |n| {
            count += 1;
            // G F E = S^a projectively, exact.
            assert!(n.g.mul(&n.f).mul(&n.e).approx_eq(&g.s_a));
            // Trace zero for all three.
            for t in [&n.e, &n.f, &n.g] {
                assert!(t.trace().is_zero());
            }
            // Adjusted Fricke equation, exact.
            assert!(n.adjusted_residual(a).is_zero());
            // z stays maximal under lambda/rho from the root.
            assert!(n.z.ge(&n.x) && n.z.ge(&n.y));
        })
        .unwrap();
        assert_eq!(count, 2 * (2usize.pow(6) - 1));
    }

    #[test]
    fn canonical_order_and_count() {
        let g = modular();
        let nodes = enumerate(&g, 2).unwrap();
        assert_eq!(nodes.len(), 14);
        let paths: Vec<String> = nodes.iter().map(|n| path_string(&n.path)).collect();
        assert_eq!(
            paths,
            vec![
                "ε", "ν", "νλ", "νλλ", "νλρ", "νρ", "νρλ", "νρρ", "λ", "λλ", "λρ", "ρ",
                "ρλ", "ρρ"
            ]
        );
        // Paths are strictly increasing in the canonical order.
        for w in nodes.windows(2) {
            assert!(w[0].path < w[1].path);
        }
        // Depth-2 multiset of z-values.
        let mut zs: Vec<i64> = nodes
            .iter()
            .map(|n| n.z.as_exact().unwrap().to_integer().try_into().unwrap())
            .collect();
        zs.sort_unstable();
        assert_eq!(zs, vec![1, 2, 2, 2, 5, 5, 5, 5, 5, 5, 13, 13, 29, 29]);
    }

    #[test]
    fn depth_zero_is_root_and_nu() {
        let g = modular();
        let nodes = enumerate(&g, 0).unwrap();
        assert_eq!(nodes.len(), 2);
        assert!(nodes[0].path.is_empty());
        assert_eq!(nodes[1].path, vec![Move::Nu]);
    }

    #[test]
    fn heights_stream_matches_matrix_tree() {
        let g = modular();
        let mut from_matrices = Vec::new();
        visit(&g, 4, &mut |n| {
            from_matrices.push((n.x.clone(), n.y.clone(), n.z.clone()))
        })
        .unwrap();
        let mut from_heights = Vec::new();
        visit_heights(&g, 4, &mut |_, x, y, z| {
            from_heights.push((x.clone(), y.clone(), z.clone()))
        });
        assert_eq!(from_matrices.len(), from_heights.len());
        for (a, b) in from_matrices.iter().zip(&from_heights) {
            assert!(a.0.sub(&b.0).is_zero());
            assert!(a.1.sub(&b.1).is_zero());
            assert!(a.2.sub(&b.2).is_zero());
        }
    }

    #[test]
    fn cover_data_matches_matrix_tree() {
        let g = modular();
        let mut from_matrices = Vec::new();
        visit(&g, 5, &mut |n| {
            let center = n.e.alpha().div(n.e.gamma()).unwrap();
            from_matrices.push((center, n.z.clone()));
        })
        .unwrap();
        let mut from_centers = Vec::new();
        visit_cover_data(&g, 5, &mut |_, c, z| {
            from_centers.push((c.clone(), z.clone()));
        });
        assert_eq!(from_matrices.len(), from_centers.len());
        for (m, c) in from_matrices.iter().zip(&from_centers) {
            assert!(m.0.sub(&c.0).is_zero(), "center {} != {}", m.0, c.0);
            assert!(m.1.sub(&c.1).is_zero());
        }
    }

    #[test]
    fn normal_form_examples() {
        let g = modular();
        let r = root(&g);
        let (t, e0, e1, e2) = normal_form(&r).unwrap();
        assert!(t.is_zero());
        assert!(e0.approx_eq(&g.t0) && e1.approx_eq(&g.t1) && e2.approx_eq(&g.t2));

        let lam = move_lambda(&r);
        let (t, _e0, e1, _e2) = normal_form(&lam).unwrap();
        assert!(t.sub(&Scalar::from_ratio(-1, 2)).is_zero());
        // Conjugated F matches E1 = [[x/z, -5/4], [y, -x/z]] at (1,1,2).
        let want = Mobius::new(
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(-5, 4),
            s(1),
            Scalar::from_ratio(-1, 2),
        )
        .unwrap();
        assert!(e1.approx_eq(&want));

        let nu = move_nu(&r, &g.s_a).unwrap();
        let (_, e0, _, _) = normal_form(&nu).unwrap();
        let want = Mobius::new(Scalar::zero(), Scalar::from_ratio(-1, 2), s(2), Scalar::zero())
            .unwrap();
        assert!(e0.approx_eq(&want));
    }

    #[test]
    fn normal_form_shapes_hold_across_nodes() {
        let g = modular();
        let a = &g.triple.a;
        visit(&g, 4, &mut |n| {
            let (_, e0, e1, e2) = normal_form(n).unwrap();
            let (x, y, z) = (&n.x, &n.y, &n.z);
            // E0 lower-left z, zero diagonal.
            assert!(e0.alpha().is_zero() && e0.delta().is_zero());
            assert!(e0.gamma().sub(z).is_zero());
            // E1 diagonal x/z, lower-left y.
            assert!(e1.alpha().sub(&x.div(z).unwrap()).is_zero());
            assert!(e1.gamma().sub(y).is_zero());
            // E2 diagonal ax - y/z, lower-left x.
            let d = a.mul(x).sub(&y.div(z).unwrap());
            assert!(e2.alpha().sub(&d).is_zero());
            assert!(e2.gamma().sub(x).is_zero());
        })
        .unwrap();
    }

    #[test]
    fn geodesic_data_modular() {
        let a = s(3);
        let d1 = geodesic_data(&s(1), &a).unwrap();
        assert!(d1.trace.sub(&s(3)).is_zero());
        let len_ref = Scalar::float_from_decimal("1.92484730023841378999103565369747369254", 256)
            .unwrap();
        assert!(d1.length.sub(&len_ref).abs().to_f64() < 1e-30);
        let peak_ref = Scalar::float_from_decimal("1.11803398874989484820458683436563811772", 256)
            .unwrap();
        assert!(d1.peak_height.sub(&peak_ref).abs().to_f64() < 1e-30);

        let d2 = geodesic_data(&s(2), &a).unwrap();
        assert!(d2.trace.sub(&s(6)).is_zero());
        let len2_ref = Scalar::float_from_decimal("3.52549434807817210093043729991916923611", 256)
            .unwrap();
        assert!(d2.length.sub(&len2_ref).abs().to_f64() < 1e-30);

        // a z = 2 exactly is the parabolic boundary.
        assert_eq!(
            geodesic_data(&Scalar::from_ratio(2, 3), &a).unwrap_err(),
            Error::NotHyperbolic
        );
    }

    #[test]
    fn exceptional_geodesics_modular() {
        let g = modular();
        let [(m1, z1), (m2, z2)] = exceptional_geodesics(&g);
        // T1 S^-3 = [[1,-5],[1,-4]], trace -3, z = 1.
        assert!(m1.approx_eq(&m(1, -5, 1, -4)));
        assert!(m1.trace().sub(&s(-3)).is_zero());
        assert!(z1.sub(&s(1)).is_zero());
        assert!(m2.trace().sub(&s(-3)).is_zero());
        assert!(z2.sub(&s(1)).is_zero());
    }
}
