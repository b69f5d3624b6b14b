//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! Every comparison is exact; there are no floating-point tolerances.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootpoly::exactlin::{rat, IVec, Int, QVec, Rat};
use rootpoly::facets::{face_fan, facet_labelings};
use rootpoly::fans::{fans_equal, normal_fan, refines};
use rootpoly::planar::{random_plane_quiver, verify_flow_duality};
use rootpoly::polytope::{f_vector, hull, is_reflexive, is_terminal, normalized_volume, polar_dual_h, Polytope};
use rootpoly::poset::{
    bounded_extension, hasse_quiver, order_polytope, random_ranked_poset, shifted_marked_order, FinitePoset,
};
use rootpoly::quiver::StarredQuiver;
use rootpoly::toric::{
    canonical_extension, cartier_conditions, class_group, condition_text, default_weights, fano_index, inequality_text,
    newton_polytope, picard_group, picard_group_general, small_resolution_fan, superpotential, superpotential_polytope,
    unimodular_triangulation, QuiverLaurent,
};

/// Criteria that fail for a reason recorded in the decisions ledger.
const KNOWN_RED: &[usize] = &[9];

const RANDOM_QUIVERS: usize = 200;
const MAX_RANDOM_DIM: usize = 6;
const RANDOM_PLANE_QUIVERS: usize = 20;
const MAX_PLANE_ARROWS: usize = 8;
const RANDOM_RANKED_POSETS: usize = 20;
const RANDOM_GRADED_POSETS: usize = 10;
const VOLUME_POSETS: usize = 10;
const MAX_POSET_SIZE: usize = 7;
const IDP_DILATIONS: [i64; 2] = [2, 3];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The hexagon: every pair among two normal vertices and a star joined both ways.
fn hexagon() -> StarredQuiver {
    StarredQuiver::complete_bidirected(2).unwrap()
}

fn fixtures() -> Vec<(&'static str, StarredQuiver)> {
    vec![
        ("segment", common::segment()),
        ("quadrilateral", common::quadrilateral()),
        ("hexagon", hexagon()),
        ("bidirected path", common::bidirected_path()),
        ("nine arrows", common::nine_arrows()),
        ("marked chains", hasse_quiver(&common::marked_chains()).unwrap()),
    ]
}

fn facet_table() -> Outcome {
    let q = common::nine_arrows();
    let rows: BTreeSet<IVec> = facet_labelings(&q).map_err(err)?.iter().map(|f| f.table_row()).collect();
    let want: BTreeSet<IVec> =
        common::NINE_ARROW_FACETS.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    check(rows.len() == 18 && rows == want, || format!("{} rows, set equal: {}", rows.len(), rows == want))
}

fn fvector() -> Outcome {
    let v = common::nine_arrows().root_vpolytope().map_err(err)?;
    let f = f_vector(&v).map_err(err)?;
    check(f == [9, 34, 70, 84, 57, 18], || format!("got {f:?}"))
}

fn quadrilateral_labelings() -> Outcome {
    let got: BTreeSet<IVec> =
        facet_labelings(&common::quadrilateral()).map_err(err)?.into_iter().map(|f| f.arrows).collect();
    let want: BTreeSet<IVec> =
        common::QUADRILATERAL_LABELINGS.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    check(got == want, || format!("got {got:?}"))
}

fn reflexive_terminal_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..RANDOM_QUIVERS {
        let n = rng.gen_range(1..=MAX_RANDOM_DIM);
        let stars = rng.gen_range(1..=3);
        let extra = rng.gen_range(0..=n + 2);
        let q = StarredQuiver::random(&mut rng, n, stars, extra).map_err(err)?;
        let v = q.root_vpolytope().map_err(err)?;
        let reflexive = is_reflexive(&v).map_err(err)?.holds();
        let terminal = is_terminal(&v).map_err(err)?;
        let points: BTreeSet<IVec> = q.root_polytope().map_err(err)?.lattice_points().into_iter().collect();
        let mut expected: BTreeSet<IVec> = q.root_points().into_iter().collect();
        expected.insert(vec![Int::from(0); n]);
        if !(reflexive && terminal && points == expected) {
            return Err(format!("quiver {i} ({n} normal vertices): reflexive {reflexive}, terminal {terminal}"));
        }
    }
    Ok(())
}

fn flow_duality() -> Outcome {
    let r = verify_flow_duality(&common::two_faces()).map_err(err)?;
    check(r.holds && r.flow_reflexive, || "two-face example fails".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < RANDOM_PLANE_QUIVERS {
        attempts += 1;
        if attempts > 100 * RANDOM_PLANE_QUIVERS {
            return Err(format!("only {checked} random plane quivers generated"));
        }
        let nv = rng.gen_range(3..=6);
        let Some(pq) = random_plane_quiver(&mut rng, nv, MAX_PLANE_ARROWS) else { continue };
        let r = verify_flow_duality(&pq).map_err(err)?;
        if !(r.holds && r.flow_reflexive) {
            return Err(format!("random plane quiver {checked}: {:?}", pq.quiver()));
        }
        checked += 1;
    }
    Ok(())
}

fn marked_order_duality() -> Outcome {
    let sp = common::marked_chains();
    let dual = polar_dual_h(&shifted_marked_order(&sp).map_err(err)?).map_err(err)?;
    let root = hasse_quiver(&sp).map_err(err)?.root_vpolytope().map_err(err)?;
    check(dual == root, || "polar dual differs from the root polytope".into())
}

fn fans_of(p: &FinitePoset) -> Result<(rootpoly::fans::Fan, rootpoly::fans::Fan), String> {
    let q = hasse_quiver(&bounded_extension(p)).map_err(err)?;
    let face = face_fan(&q).map_err(err)?;
    let normal = normal_fan(&Polytope::from_h(&order_polytope(p)).map_err(err)?).map_err(err)?;
    Ok((face, normal))
}

fn fan_refinement() -> Outcome {
    let (face, normal) = fans_of(&common::ranked_ungraded())?;
    check(refines(&face, &normal).map_err(err)?.holds, || "ranked example does not refine".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..RANDOM_RANKED_POSETS {
        let size = rng.gen_range(1..=MAX_POSET_SIZE);
        let p = random_ranked_poset(&mut rng, size, false);
        let (face, normal) = fans_of(&p)?;
        check(refines(&face, &normal).map_err(err)?.holds, || format!("random ranked poset {i}: {:?}", p.covers()))?;
    }
    for i in 0..RANDOM_GRADED_POSETS {
        let size = rng.gen_range(1..=MAX_POSET_SIZE);
        let p = random_ranked_poset(&mut rng, size, true);
        let (face, normal) = fans_of(&p)?;
        check(fans_equal(&face, &normal).map_err(err)?, || format!("random graded poset {i}: {:?}", p.covers()))?;
    }
    let (face, normal) = fans_of(&common::unranked_chain())?;
    let r = refines(&face, &normal).map_err(err)?;
    check(!r.holds && r.witness().is_some(), || "non-ranked example refines or has no witness".into())
}

fn small_resolution() -> Outcome {
    let nine_arrows = small_resolution_fan(&common::nine_arrows()).map_err(err)?;
    let bidirected_path = small_resolution_fan(&common::bidirected_path()).map_err(err)?;
    check(nine_arrows.is_unimodular() && bidirected_path.is_unimodular(), || "a non-unimodular cone remains".into())?;
    check(bidirected_path.subdivided.len() == 3, || format!("{} cones subdivided", bidirected_path.subdivided.len()))
}

fn picard_and_class() -> Outcome {
    let q = common::bidirected_path();
    let mut problems = Vec::new();
    let pic = picard_group_general(&q).map_err(err)?;
    if pic.rank() != 1 {
        problems.push(format!("Pic rank {}", pic.rank()));
    }
    let fano = fano_index(&q).map_err(err)?;
    if fano != Int::from(2) {
        problems.push(format!("Fano index {fano}"));
    }
    let conds: BTreeSet<String> = cartier_conditions(&q).map_err(err)?.iter().map(|k| condition_text(k)).collect();
    let want: BTreeSet<String> = ["c_0 + c_1 = c_4 + c_6", "c_0 + c_3 = c_2 + c_6", "c_0 + c_5 = c_2 + c_4"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if conds != want {
        problems.push(format!("Cartier conditions {conds:?}"));
    }

    let ext = canonical_extension(&common::merged_tops()).map_err(err)?;
    let maxima = ext.poset.poset.maximal().len();
    if maxima != 3 {
        problems.push(format!("{maxima} maximal elements"));
    }
    let qbar = hasse_quiver(&ext.poset).map_err(err)?;
    let pic = picard_group(&qbar).map_err(err)?;
    if pic.group.rank() != 3 || pic.warning.is_some() {
        problems.push(format!("Pic rank {}", pic.group.rank()));
    }
    let cl = class_group(&qbar).map_err(err)?.rank();
    if cl != 4 {
        problems.push(format!(
            "Cl rank {cl}, expected 4 (arrows - normal vertices = {})",
            qbar.arrows().len() - qbar.dim()
        ));
    }
    check(problems.is_empty(), || problems.join("; "))
}

/// Linear extensions by enumerating every permutation.
fn linear_extensions_brute(p: &FinitePoset) -> u64 {
    fn go(p: &FinitePoset, order: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        if order.len() == p.len() {
            let pos: Vec<usize> = {
                let mut pos = vec![0; p.len()];
                for (i, &e) in order.iter().enumerate() {
                    pos[e] = i;
                }
                pos
            };
            return u64::from(p.covers().iter().all(|&(a, b)| pos[a] < pos[b]));
        }
        let mut total = 0;
        for e in 0..p.len() {
            if !used[e] {
                used[e] = true;
                order.push(e);
                total += go(p, order, used);
                order.pop();
                used[e] = false;
            }
        }
        total
    }
    go(p, &mut Vec::new(), &mut vec![false; p.len()])
}

fn volume_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..VOLUME_POSETS {
        let size = rng.gen_range(1..=MAX_POSET_SIZE);
        let p = random_ranked_poset(&mut rng, size, false);
        let q = hasse_quiver(&bounded_extension(&p)).map_err(err)?;
        let simplices = unimodular_triangulation(&q).map_err(err)?.simplices.len();
        let vol = normalized_volume(&q.root_polytope().map_err(err)?).map_err(err)?;
        check(rat(simplices as i64) == vol, || format!("poset {i}: {simplices} simplices, volume {vol}"))?;
        let s = superpotential(&q, &default_weights(&q)).map_err(err)?;
        let gamma = Polytope::from_h(&superpotential_polytope(&s, &[rat(1)]).map_err(err)?).map_err(err)?;
        let gvol = normalized_volume(&gamma).map_err(err)?;
        let count = linear_extensions_brute(&p);
        check(gvol == rat(count as i64), || format!("poset {i}: volume {gvol}, {count} linear extensions"))?;
    }
    Ok(())
}

/// All sums of `k` points from `pts`.
fn k_sums(pts: &[IVec], k: i64) -> HashSet<IVec> {
    let mut sums: HashSet<IVec> = pts.iter().cloned().collect();
    for _ in 1..k {
        sums =
            sums.iter().flat_map(|s| pts.iter().map(move |p| s.iter().zip(p).map(|(a, b)| a + b).collect())).collect();
    }
    sums
}

fn idp_spot_check() -> Outcome {
    for (name, q) in fixtures().into_iter().take(5) {
        let root = q.root_polytope().map_err(err)?;
        let pts = root.lattice_points();
        for k in IDP_DILATIONS {
            let scaled: Vec<QVec> = root
                .vertices()
                .iter()
                .map(|v| v.iter().map(|x| x * Rat::from_integer(Int::from(k))).collect())
                .collect();
            let big = hull(&scaled).map_err(err)?;
            let sums = k_sums(&pts, k);
            if let Some(p) = big.lattice_points().into_iter().find(|p| !sums.contains(p)) {
                return Err(format!("{name}, k = {k}: {p:?} does not decompose"));
            }
        }
    }
    Ok(())
}

fn superpotential_example() -> Outcome {
    let printed = [
        "X_1 >= 0",
        "X_2 - X_1 >= 0",
        "X_3 - X_2 >= 0",
        "X_4 - X_3 >= 0",
        "1 - X_1 >= 0",
        "X_5 - X_1 >= 0",
        "X_6 - X_2 >= 0",
        "X_6 - X_5 >= 0",
        "1 - X_6 >= 0",
    ];
    let r = [rat(1), rat(1)];
    // the polynomial as printed in the worked example
    let s =
        QuiverLaurent::parse("x_1 + x_2/x_1 + x_3/x_2 + x_4/x_3 + q_1/x_1 + x_5/x_1 + x_6/x_2 + x_6/x_5 + q_2/x_6", 6)
            .map_err(err)?;
    let texts: Vec<String> =
        superpotential_polytope(&s, &r).map_err(err)?.inequalities().iter().map(|i| inequality_text(i, "X")).collect();
    check(texts == printed, || format!("printed polynomial gives {texts:?}"))?;

    // the quiver's own arrow into the first sink ends at v4
    let q = common::nine_arrows();
    let s = superpotential(&q, &default_weights(&q)).map_err(err)?;
    let texts: Vec<String> =
        superpotential_polytope(&s, &r).map_err(err)?.inequalities().iter().map(|i| inequality_text(i, "X")).collect();
    let mut want: Vec<String> = printed.iter().map(|s| s.to_string()).collect();
    want[4] = "1 - X_4 >= 0".into();
    check(texts == want, || format!("quiver superpotential gives {texts:?}"))?;

    for (name, q) in fixtures() {
        let s = superpotential(&q, &default_weights(&q)).map_err(err)?;
        let newton = newton_polytope(&s).map_err(err)?;
        check(newton == q.root_vpolytope().map_err(err)?, || format!("{name}: Newton polytope differs"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("facet table reproduction", facet_table),
        ("f-vector", fvector),
        ("quadrilateral facet labelings", quadrilateral_labelings),
        ("reflexive and terminal on random quivers", reflexive_terminal_suite),
        ("flow duality", flow_duality),
        ("marked order duality", marked_order_duality),
        ("fan refinement", fan_refinement),
        ("small resolution", small_resolution),
        ("Picard and class groups", picard_and_class),
        ("volume oracle", volume_oracle),
        ("IDP spot check", idp_spot_check),
        ("superpotential", superpotential_example),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let known = KNOWN_RED.contains(&id);
        match &outcome {
            Ok(()) => println!("PASS {id:>2} {name}"),
            Err(why) => println!("FAIL {id:>2} {name}: {why}{}", if known { " (known)" } else { "" }),
        }
        if outcome.is_ok() == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
