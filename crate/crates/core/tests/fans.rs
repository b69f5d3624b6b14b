mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootpoly::facets::{face_fan, facet_components, facet_labelings};
use rootpoly::fans::{fans_equal, normal_fan, refines};
use rootpoly::polytope::Polytope;
use rootpoly::poset::{bounded_extension, hasse_quiver, order_polytope, random_ranked_poset, FinitePoset};

fn fans_of(p: &FinitePoset) -> (rootpoly::fans::Fan, rootpoly::fans::Fan) {
    let q = hasse_quiver(&bounded_extension(p)).unwrap();
    let face = face_fan(&q).unwrap();
    let normal = normal_fan(&Polytope::from_h(&order_polytope(p)).unwrap()).unwrap();
    (face, normal)
}

#[test]
fn ranked_poset_fan_refines_but_differs() {
    let (face, normal) = fans_of(&common::ranked_ungraded());
    let r = refines(&face, &normal).unwrap();
    assert!(r.rays_equal);
    assert!(r.holds);
    assert!(!fans_equal(&face, &normal).unwrap());
}

#[test]
fn non_ranked_poset_fan_does_not_refine() {
    let (face, normal) = fans_of(&common::unranked_chain());
    let r = refines(&face, &normal).unwrap();
    assert!(r.rays_equal);
    assert!(!r.holds);
    let w = r.witness().unwrap();
    assert!(face.cones_with_interior_point(&interior(&face, w)).contains(&w));
}

fn interior(f: &rootpoly::fans::Fan, i: usize) -> Vec<rootpoly::exactlin::Rat> {
    let gens = f.cone_generators(i);
    let mut v = vec![rootpoly::exactlin::rat(0); f.dim()];
    for g in gens {
        for (x, y) in v.iter_mut().zip(g) {
            *x += rootpoly::exactlin::Rat::from_integer(y);
        }
    }
    v
}

#[test]
fn non_ranked_poset_shares_a_component() {
    let q = hasse_quiver(&bounded_extension(&common::shared_component())).unwrap();
    let shared =
        facet_labelings(&q).unwrap().iter().any(|f| facet_components(&q, f).iter().any(|c| c.stars().len() == 2));
    assert!(shared);
    let q = hasse_quiver(&bounded_extension(&common::ranked_ungraded())).unwrap();
    let shared =
        facet_labelings(&q).unwrap().iter().any(|f| facet_components(&q, f).iter().any(|c| c.stars().len() == 2));
    assert!(!shared);
}

#[test]
fn random_ranked_posets_refine() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rand::Rng::gen_range(&mut rng, 1..=7);
        let p = random_ranked_poset(&mut rng, n, false);
        let (face, normal) = fans_of(&p);
        assert!(refines(&face, &normal).unwrap().holds, "{:?}", p.covers());
    }
}

#[test]
fn random_graded_posets_have_equal_fans() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let n = rand::Rng::gen_range(&mut rng, 1..=7);
        let p = random_ranked_poset(&mut rng, n, true);
        let (face, normal) = fans_of(&p);
        assert!(fans_equal(&face, &normal).unwrap(), "{:?}", p.covers());
    }
}
