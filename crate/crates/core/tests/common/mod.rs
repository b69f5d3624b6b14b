#![allow(dead_code)]

use rootpoly::quiver::StarredQuiver;

/// The running nine-arrow example with three stars.
pub fn nine_arrows() -> StarredQuiver {
    StarredQuiver::new(
        &["v1", "v2", "v3", "v4", "v5", "v6"],
        &["s", "q1", "q2"],
        &[
            ("s", "v1"),
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "q1"),
            ("v1", "v5"),
            ("v2", "v6"),
            ("v5", "v6"),
            ("v6", "q2"),
        ],
    )
    .unwrap()
}

/// Two normal vertices, one star, four arrows; its root polytope is a quadrilateral.
pub fn quadrilateral() -> StarredQuiver {
    StarredQuiver::new(&["v1", "v2"], &["s"], &[("s", "v1"), ("v1", "s"), ("v1", "v2"), ("v2", "s")]).unwrap()
}

/// Bidirected path between two stars with three normal vertices.
pub fn bidirected_path() -> StarredQuiver {
    StarredQuiver::new(
        &["v1", "v2", "v3"],
        &["sl", "sr"],
        &[("sl", "v1"), ("v1", "v2"), ("v2", "v1"), ("v2", "v3"), ("v3", "v2"), ("v3", "sr"), ("sr", "v3")],
    )
    .unwrap()
}

pub fn segment() -> StarredQuiver {
    StarredQuiver::new(&["v"], &["s"], &[("s", "v"), ("v", "s")]).unwrap()
}

pub const NINE_ARROW_FACETS: [[i64; 7]; 18] = [
    [1, 3, 2, 2, 1, 2, 1],
    [1, 3, 2, 1, 0, 2, 1],
    [1, 3, 2, 1, 1, 2, 1],
    [1, -1, -2, -3, 1, -2, -3],
    [1, -1, -2, -3, 1, 2, 1],
    [1, -1, 2, 1, 1, 2, 1],
    [1, -1, 2, 1, 1, -2, 1],
    [1, -1, -2, -3, 1, -2, 1],
    [1, -1, -2, 2, 1, -2, 1],
    [1, -1, 2, 2, 1, -2, 1],
    [1, -1, 2, 2, 1, 2, 1],
    [1, -1, -2, 2, 1, 2, 1],
    [1, -1, -2, 2, 1, -2, -3],
    [1, -1, -2, -3, -4, -2, 1],
    [1, -1, 2, 1, 0, -2, 1],
    [1, -1, 2, 1, 0, 2, 1],
    [1, -1, -2, -3, -4, 2, 1],
    [1, -1, -2, -3, -4, -2, -3],
];

/// Three vertices, two parallel arrows on the bottom edge; two bounded faces.
pub fn two_faces() -> rootpoly::planar::PlaneQuiver {
    use rootpoly::quiver::Quiver;
    let q = Quiver::new(&["A", "B", "T"], &[("A", "B"), ("A", "B"), ("B", "T"), ("A", "T")]).unwrap();
    // r1 is the lower of the two parallel arrows
    rootpoly::planar::PlaneQuiver::new(q, vec![vec![0, 1, 3], vec![2, 1, 0], vec![3, 2]], vec![0, 2, 3]).unwrap()
}

/// Ranked poset with four maximal elements, two of which end up sharing a top.
pub fn merged_tops() -> rootpoly::poset::FinitePoset {
    rootpoly::poset::FinitePoset::new(
        &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "mj1", "mj2", "mk", "ml"],
        &[
            ("v1", "v3"),
            ("v1", "v4"),
            ("v2", "v4"),
            ("v2", "v5"),
            ("v3", "mj1"),
            ("v3", "v6"),
            ("v4", "v6"),
            ("v4", "mj2"),
            ("v5", "mj2"),
            ("v5", "v7"),
            ("v6", "mk"),
            ("v7", "ml"),
        ],
    )
    .unwrap()
}

/// Starred poset drawn as the nine-arrow quiver: a chain of four under one top star,
/// a side chain of two under a second top star.
pub fn marked_chains() -> rootpoly::poset::StarredPoset {
    let p = rootpoly::poset::FinitePoset::new(
        &["s0", "v1", "v2", "v3", "v4", "v5", "v6", "s1", "s2"],
        &[
            ("s0", "v1"),
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "s1"),
            ("v2", "v6"),
            ("v1", "v5"),
            ("v5", "v6"),
            ("v6", "s2"),
        ],
    )
    .unwrap();
    rootpoly::poset::StarredPoset::from_names(p, &["s0", "s1", "s2"]).unwrap()
}

/// Ranked but not graded: maximal elements at ranks 2 and 3.
pub fn ranked_ungraded() -> rootpoly::poset::FinitePoset {
    rootpoly::poset::FinitePoset::new(
        &["a", "b", "c", "d", "e", "f"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"), ("c", "e"), ("d", "f")],
    )
    .unwrap()
}

/// Not ranked: a long chain and a single cover both end in `w7`.
pub fn unranked_chain() -> rootpoly::poset::FinitePoset {
    rootpoly::poset::FinitePoset::new(
        &["w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8"],
        &[("w1", "w7"), ("w2", "w8"), ("w2", "w3"), ("w3", "w4"), ("w4", "w5"), ("w5", "w6"), ("w6", "w7")],
    )
    .unwrap()
}

/// Not ranked: a component containing both stars exists.
pub fn shared_component() -> rootpoly::poset::FinitePoset {
    rootpoly::poset::FinitePoset::new(
        &["v1", "v2", "v3", "v4", "v5", "v6", "v7"],
        &[("v1", "v6"), ("v2", "v7"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5"), ("v5", "v6")],
    )
    .unwrap()
}

/// The four pictured facet arrow-labelings of `quadrilateral`, in its arrow order.
pub const QUADRILATERAL_LABELINGS: [[i64; 4]; 4] = [[-1, 1, -1, 2], [-1, 1, 2, -1], [1, -1, -1, 0], [1, -1, 0, -1]];
