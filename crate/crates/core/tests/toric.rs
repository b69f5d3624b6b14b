mod common;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rootpoly::exactlin::{image_basis, ivec, lattice_coordinates, rat, IMat, IVec, Int};
use rootpoly::polytope::{hull, normalized_volume, polar_dual, Polytope};
use rootpoly::poset::{bounded_extension, hasse_quiver, max_extension, order_polytope};
use rootpoly::toric::*;

fn ones(n: usize) -> IVec {
    vec![Int::one(); n]
}

/// Whether `v` lies in the lattice spanned by `gens` (all in `Z^n`).
fn in_span(gens: &[IVec], v: &[Int], n: usize) -> bool {
    let basis = image_basis(&IMat::from_columns(gens, n).unwrap());
    lattice_coordinates(&basis, v).unwrap().is_some()
}

/// Largest `d ≤ bound` with `−K ∈ d·Cartier + M_Q`, by direct lattice membership.
fn fano_index_by_search(q: &rootpoly::quiver::StarredQuiver, bound: i64) -> i64 {
    let n = q.arrows().len();
    let cart = cartier_lattice(q).unwrap();
    let m = zero_sum_lattice(q).unwrap();
    (1..=bound)
        .rev()
        .find(|&d| {
            let mut gens: Vec<IVec> = cart.generators().iter().map(|g| g.iter().map(|x| x * d).collect()).collect();
            gens.extend(m.generators().iter().cloned());
            in_span(&gens, &ones(n), n)
        })
        .unwrap()
}

#[test]
fn bidirected_path_small_resolution() {
    let q = common::bidirected_path();
    let t = small_resolution_fan(&q).unwrap();
    assert_eq!(t.subdivided.len(), 3);
    assert!(t.is_unimodular());
    let coarse = rootpoly::facets::face_fan(&q).unwrap();
    let r = rootpoly::fans::refines(&t.fan().unwrap(), &coarse).unwrap();
    assert!(r.holds);
}

#[test]
fn bidirected_path_cartier_conditions() {
    let q = common::bidirected_path();
    let got: BTreeSet<String> = cartier_conditions(&q).unwrap().iter().map(|k| condition_text(k)).collect();
    let expected: BTreeSet<String> = ["c_0 + c_1 = c_4 + c_6", "c_0 + c_3 = c_2 + c_6", "c_0 + c_5 = c_2 + c_4"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn bidirected_path_picard_and_fano_index() {
    let q = common::bidirected_path();
    let pic = picard_group_general(&q).unwrap();
    assert_eq!(pic.rank(), 1);
    assert!(pic.is_free());
    // D_{a1} + D_{a3} + D_{a5} - D_{a0} generates, and -K is twice it
    let gen = ivec(&[-1, 1, 0, 1, 0, 1, 0]);
    let c = pic.class_of(&gen).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].clone() * c[0].clone(), Int::one());
    let k = pic.class_of(&ones(7)).unwrap();
    assert_eq!(k[0].clone(), &c[0] * Int::from(2));
    assert_eq!(fano_index(&q).unwrap(), Int::from(2));
    assert_eq!(fano_index_by_search(&q, 6), 2);
    assert_eq!(zero_sum_lattice(&q).unwrap().rank(), 3);
    assert_eq!(class_group(&q).unwrap().rank(), 4);
    // two distinct stars: C_Q is not the Cartier lattice
    let p = picard_group(&q).unwrap();
    assert!(p.warning.is_some());
    assert_eq!(p.group.rank(), 1);
}

#[test]
fn bidirected_path_superpotential() {
    let q = common::bidirected_path();
    let s = superpotential(&q, &[Weight::One, Weight::One]).unwrap();
    assert_eq!(s.text(), "x_1 + x_2/x_1 + x_1/x_2 + x_3/x_2 + x_2/x_3 + 1/x_3 + x_3");
    let printed = QuiverLaurent::parse("x_1 + x_1/x_2 + x_2/x_3 + x_3 + x_2/x_1 + x_3/x_2 + 1/x_3", 3).unwrap();
    let a: BTreeSet<_> = s.terms.iter().cloned().collect();
    let b: BTreeSet<_> = printed.terms.iter().cloned().collect();
    assert_eq!(a, b);
    let newt = newton_polytope(&s).unwrap();
    assert_eq!(newt.vertices().len(), 7);
    assert_eq!(&newt, &q.root_vpolytope().unwrap());
}

#[test]
fn nine_arrows_refinement_is_unimodular() {
    let q = common::nine_arrows();
    let t = small_resolution_fan(&q).unwrap();
    assert!(t.is_unimodular());
    let tri = unimodular_triangulation(&q).unwrap();
    let vol = normalized_volume(&q.root_polytope().unwrap()).unwrap();
    assert_eq!(rat(tri.simplices.len() as i64), vol);
}

#[test]
fn quadrilateral_triangulation_and_idp() {
    let q = common::quadrilateral();
    let tri = unimodular_triangulation(&q).unwrap();
    assert_eq!(tri.simplices.len(), 4);
    let root = q.root_polytope().unwrap();
    assert_eq!(normalized_volume(&root).unwrap(), rat(4));
    let pts = root.lattice_points();
    let doubled: Vec<_> = root.vertices().iter().map(|v| v.iter().map(|x| x * rat(2)).collect()).collect();
    let big = hull(&doubled).unwrap();
    for p in big.lattice_points() {
        let ok = pts.iter().any(|a| {
            let b: IVec = p.iter().zip(a).map(|(x, y)| x - y).collect();
            pts.contains(&b)
        });
        assert!(ok, "{p:?} does not decompose");
    }
}

#[test]
fn smooth_fixture_has_equal_groups() {
    let q = common::quadrilateral();
    assert!(cartier_conditions(&q).unwrap().is_empty());
    assert_eq!(cartier_lattice(&q).unwrap().rank(), q.arrows().len());
    assert_eq!(picard_group_general(&q).unwrap().rank(), class_group(&q).unwrap().rank());
}

#[test]
fn anticanonical_divisor_polytope_is_polar_dual() {
    for q in [common::nine_arrows(), common::bidirected_path(), common::quadrilateral()] {
        let d = divisor_polytope(&q, &ones(q.arrows().len())).unwrap();
        assert!(d.cartier);
        let p = Polytope::from_h(&d.polytope).unwrap();
        let dual = polar_dual(&q.root_vpolytope().unwrap()).unwrap();
        assert_eq!(p.vertices(), dual.vertices());
    }
    let q = common::bidirected_path();
    let weil = ivec(&[1, 0, 0, 0, 0, 0, 0]);
    let d = divisor_polytope(&q, &weil).unwrap();
    assert!(!d.cartier);
    assert!(!is_cartier(&q, &weil).unwrap());
    let zero = divisor_polytope(&q, &vec![Int::zero(); 7]).unwrap();
    assert_eq!(Polytope::from_h(&zero.polytope).unwrap().vertices().len(), 1);
}

#[test]
fn cartier_routes_agree() {
    for q in [common::nine_arrows(), common::bidirected_path(), common::quadrilateral()] {
        let cart = cartier_lattice(&q).unwrap();
        for g in cart.generators() {
            assert!(is_cartier(&q, g).unwrap());
        }
        let m = zero_sum_lattice(&q).unwrap();
        for g in m.generators() {
            assert!(cart.contains(g));
            assert!(independent_sum_lattice(&q).unwrap().contains(g));
        }
        let n = q.arrows().len();
        for a in 0..n {
            let mut e = vec![Int::zero(); n];
            e[a] = Int::one();
            assert_eq!(is_cartier(&q, &e).unwrap(), cart.contains(&e));
        }
    }
}

#[test]
fn merged_tops_canonical_extension() {
    let p = common::merged_tops();
    let ext = canonical_extension(&p).unwrap();
    assert_eq!(ext.poset.poset.maximal().len(), 3);
    let merged: Vec<Vec<&str>> = ext
        .classes
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().map(|&m| p.elements()[m].as_str()).collect())
        .collect();
    assert_eq!(merged, vec![vec!["mj1", "mj2"]]);
    let q = hasse_quiver(&ext.poset).unwrap();
    let pic = picard_group(&q).unwrap();
    assert!(pic.warning.is_none());
    assert_eq!(pic.group.rank(), 3);
    assert_eq!(pic.generators.len(), 3);
    assert_eq!(picard_group_general(&q).unwrap().rank(), 3);
    assert_eq!(independent_sum_lattice(&q).unwrap().rank(), p.len() + 4 - 1);
    // the sink-star divisors form a basis of Pic
    let classes: Vec<IVec> = pic.generators.iter().map(|d| pic.group.class_of(d).unwrap()).collect();
    let det = rootpoly::exactlin::determinant(&IMat::from_rows(&classes, 3).unwrap()).unwrap();
    assert_eq!(det.clone() * det, Int::one());
}

#[test]
fn merged_tops_class_group_of_maximal_extension() {
    let p = common::merged_tops();
    let q = hasse_quiver(&max_extension(&p)).unwrap();
    let cl = class_group(&q).unwrap();
    assert!(cl.is_free());
    assert_eq!(cl.rank(), q.arrows().len() - q.dim());
}

#[test]
fn chain_and_unique_maximum() {
    let chain = rootpoly::poset::FinitePoset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
    let ext = canonical_extension(&chain).unwrap();
    assert_eq!(ext.classes.len(), 1);
    let q = hasse_quiver(&ext.poset).unwrap();
    assert_eq!(picard_group(&q).unwrap().group.rank(), 1);
    let diamond =
        rootpoly::poset::FinitePoset::new(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
            .unwrap();
    let ext = canonical_extension(&diamond).unwrap();
    let hat = bounded_extension(&diamond);
    assert_eq!(ext.poset.poset.len(), hat.poset.len());
    assert_eq!(ext.poset.poset.covers().len(), hat.poset.covers().len());
    let not_ranked =
        rootpoly::poset::FinitePoset::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("d", "c")]).unwrap();
    assert!(canonical_extension(&not_ranked).is_err());
}

#[test]
fn superpotential_polytope_is_order_polytope() {
    let p = common::merged_tops();
    let q = hasse_quiver(&bounded_extension(&p)).unwrap();
    let s = superpotential(&q, &default_weights(&q)).unwrap();
    assert_eq!(s.nparams, 1);
    let gamma = Polytope::from_h(&superpotential_polytope(&s, &[rat(1)]).unwrap()).unwrap();
    let order = Polytope::from_h(&order_polytope(&p)).unwrap();
    assert_eq!(gamma.vertices(), order.vertices());
    assert_eq!(normalized_volume(&gamma).unwrap(), rat(p.linear_extension_count() as i64));
    assert!(superpotential_polytope(&s, &[rat(1), rat(1)]).is_err());
}

#[test]
fn nine_arrows_superpotential_and_gamma() {
    let q = common::nine_arrows();
    let s = superpotential(&q, &default_weights(&q)).unwrap();
    assert_eq!(s.text(), "x_1 + x_2/x_1 + x_3/x_2 + x_4/x_3 + q_1/x_4 + x_5/x_1 + x_6/x_2 + x_6/x_5 + q_2/x_6");
    assert_eq!(newton_polytope(&s).unwrap(), q.root_vpolytope().unwrap());
    let g = superpotential_polytope(&s, &[rat(1), rat(1)]).unwrap();
    let texts: Vec<String> = g.inequalities().iter().map(|i| inequality_text(i, "X")).collect();
    assert_eq!(
        texts,
        vec![
            "X_1 >= 0",
            "X_2 - X_1 >= 0",
            "X_3 - X_2 >= 0",
            "X_4 - X_3 >= 0",
            "1 - X_4 >= 0",
            "X_5 - X_1 >= 0",
            "X_6 - X_2 >= 0",
            "X_6 - X_5 >= 0",
            "1 - X_6 >= 0",
        ]
    );
    // Σ r_i D_i on the sink stars gives the same polytope
    let d: IVec = sink_star_divisors(&q)
        .iter()
        .fold(vec![Int::zero(); 9], |acc, v| acc.iter().zip(v).map(|(a, b)| a + b).collect());
    let dp = divisor_polytope(&q, &d).unwrap();
    assert_eq!(Polytope::from_h(&dp.polytope).unwrap().vertices(), Polytope::from_h(&g).unwrap().vertices());
}
