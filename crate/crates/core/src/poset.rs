//! Finite posets given by cover relations, their extensions, and (marked) order polytopes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{Int, Rat};
use crate::polytope::{HPolytope, Inequality};
use crate::quiver::{Arrow, StarredQuiver, Vertex};

/// A finite poset stored by its covers. The strict up-sets are computed once on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<String>,
    covers: Vec<(usize, usize)>,
    above: Vec<FixedBitSet>,
}

impl FinitePoset {
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::invalid(format!("element {e:?} declared twice")));
            }
        }
        let mut idx = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let get = |s: &str| index.get(s).copied().ok_or_else(|| Error::invalid(format!("unknown element {s:?}")));
            idx.push((get(a.as_ref())?, get(b.as_ref())?));
        }
        Self::from_indices(elements, idx)
    }

    pub fn from_indices(elements: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = elements.len();
        let mut seen = HashSet::new();
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::invalid("cover index out of range"));
            }
            if a == b {
                return Err(Error::invalid(format!("{} covers itself", elements[a])));
            }
            if !seen.insert((a, b)) {
                return Err(Error::invalid(format!("cover {} < {} listed twice", elements[a], elements[b])));
            }
        }
        let mut up = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &covers {
            up[a].push(b);
            indeg[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &up[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if order.len() != n {
            return Err(Error::invalid("cover relations contain a cycle"));
        }
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for &u in order.iter().rev() {
            let mut s = FixedBitSet::with_capacity(n);
            for &v in &up[u] {
                s.insert(v);
                s.union_with(&above[v]);
            }
            above[u] = s;
        }
        for &(a, b) in &covers {
            if up[a].iter().any(|&c| c != b && above[c].contains(b)) {
                return Err(Error::invalid(format!("{} < {} is not a cover", elements[a], elements[b])));
            }
        }
        Ok(FinitePoset { elements, covers, above })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn minimal(&self) -> Vec<usize> {
        let mut has_lower = vec![false; self.len()];
        self.covers.iter().for_each(|&(_, b)| has_lower[b] = true);
        (0..self.len()).filter(|&v| !has_lower[v]).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.above[v].count_ones(..) == 0).collect()
    }

    /// Longest chain from a minimal element to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            below[b].push(a);
        }
        for v in topological(&self.covers, self.len()) {
            h[v] = below[v].iter().map(|&a| h[a] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Whether this poset is ranked, ranked only in the generalized sense, or neither.
    pub fn rank_status(&self) -> RankStatus {
        let h = self.heights();
        if self.covers.iter().all(|&(a, b)| h[b] == h[a] + 1) {
            return RankStatus::Ranked;
        }
        if self.potential().is_some() {
            RankStatus::GeneralizedOnly
        } else {
            RankStatus::NotRanked
        }
    }

    /// A function increasing by one along every cover, if one exists.
    fn potential(&self) -> Option<Vec<i64>> {
        let n = self.len();
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for &(a, b) in &self.covers {
            adj[a].push((b, 1));
            adj[b].push((a, -1));
        }
        let mut value: Vec<Option<i64>> = vec![None; n];
        for s in 0..n {
            if value[s].is_some() {
                continue;
            }
            value[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let vu = value[u].unwrap();
                for &(v, d) in &adj[u] {
                    match value[v] {
                        None => {
                            value[v] = Some(vu + d);
                            queue.push_back(v);
                        }
                        Some(x) if x != vu + d => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(value.into_iter().map(Option::unwrap).collect())
    }

    /// The rank function, minimal elements at rank 0; `None` unless ranked.
    pub fn rank_function(&self) -> Option<RankFunction> {
        (self.rank_status() == RankStatus::Ranked).then(|| RankFunction { ranks: self.heights() })
    }

    /// Every maximal chain of the bounded extension has the same length.
    pub fn is_graded(&self) -> bool {
        bounded_extension(self).poset.rank_status() == RankStatus::Ranked
    }

    /// All up-sets, sorted by size and then lexicographically on element indices.
    pub fn filters(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        self.antichains_from(0, &mut chosen, &mut |anti| {
            let mut f = FixedBitSet::with_capacity(n);
            for &a in anti {
                f.insert(a);
                f.union_with(&self.above[a]);
            }
            out.push(f.ones().collect::<Vec<_>>());
        });
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn antichains_from(&self, start: usize, chosen: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
        emit(chosen);
        for v in start..self.len() {
            if chosen.iter().all(|&c| !self.comparable(c, v)) {
                chosen.push(v);
                self.antichains_from(v + 1, chosen, emit);
                chosen.pop();
            }
        }
    }

    /// Number of linear extensions, by dynamic programming over down-sets.
    pub fn linear_extension_count(&self) -> u128 {
        let n = self.len();
        assert!(n <= 24, "linear extension count is exponential in |P|");
        let mut below_mask = vec![0u32; n];
        for &(a, b) in &self.covers {
            below_mask[b] |= 1 << a;
        }
        let mut ways = vec![0u128; 1 << n];
        ways[0] = 1;
        for mask in 0..(1usize << n) {
            if ways[mask] == 0 {
                continue;
            }
            for v in 0..n {
                if mask & (1 << v) == 0 && (below_mask[v] as usize) & !mask == 0 {
                    ways[mask | (1 << v)] += ways[mask];
                }
            }
        }
        ways[(1 << n) - 1]
    }

    /// Connected components of the Hasse diagram.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            adj[a].push(b);
            adj[b].push(a);
        }
        self.is_empty() || crate::quiver::reachable(&adj, 0).iter().all(|&r| r)
    }
}

fn topological(covers: &[(usize, usize)], n: usize) -> Vec<usize> {
    let mut indeg = vec![0usize; n];
    let mut up = vec![Vec::new(); n];
    for &(a, b) in covers {
        up[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &up[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankStatus {
    Ranked,
    /// Some function increases by one along covers, but minimal elements sit at different levels.
    GeneralizedOnly,
    NotRanked,
}

/// Rank of each element, in element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFunction {
    pub ranks: Vec<usize>,
}

/// A poset with a distinguished set of star elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarredPoset {
    pub poset: FinitePoset,
    stars: Vec<usize>,
}

impl StarredPoset {
    pub fn new(poset: FinitePoset, stars: Vec<usize>) -> Result<Self> {
        let mut is_star = vec![false; poset.len()];
        for &s in &stars {
            if s >= poset.len() {
                return Err(Error::invalid("star index out of range"));
            }
            is_star[s] = true;
        }
        for v in poset.minimal().into_iter().chain(poset.maximal()) {
            if !is_star[v] {
                return Err(Error::invalid(format!("extremal element {} must be a star", poset.elements[v])));
            }
        }
        for &(a, b) in &poset.covers {
            if is_star[a] && is_star[b] {
                return Err(Error::invalid(format!(
                    "cover {} < {} joins two stars",
                    poset.elements[a], poset.elements[b]
                )));
            }
        }
        let mut stars: Vec<usize> = (0..poset.len()).filter(|&v| is_star[v]).collect();
        stars.dedup();
        Ok(StarredPoset { poset, stars })
    }

    pub fn from_names<S: AsRef<str>>(poset: FinitePoset, stars: &[S]) -> Result<Self> {
        let idx = stars
            .iter()
            .map(|s| poset.index_of(s.as_ref()).ok_or_else(|| Error::invalid(format!("unknown star {:?}", s.as_ref()))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(poset, idx)
    }

    pub fn stars(&self) -> &[usize] {
        &self.stars
    }

    pub fn is_star(&self, v: usize) -> bool {
        self.stars.binary_search(&v).is_ok()
    }

    /// Non-star elements in element order; these are the coordinates of the order polytopes.
    pub fn normal_elements(&self) -> Vec<usize> {
        (0..self.poset.len()).filter(|&v| !self.is_star(v)).collect()
    }

    /// Position of each element among normal elements or among stars.
    fn vertex_map(&self) -> Vec<Vertex> {
        let mut normal = 0;
        let mut star = 0;
        (0..self.poset.len())
            .map(|v| {
                if self.is_star(v) {
                    star += 1;
                    Vertex::Star(star - 1)
                } else {
                    normal += 1;
                    Vertex::Normal(normal - 1)
                }
            })
            .collect()
    }
}

fn fresh_name(taken: &HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// A random ranked poset on `n` elements, built level by level.
///
/// Every element above level 0 covers at least one element of the level below, so
/// minimal elements sit at level 0 and the level is the rank. With `graded` set,
/// every element below the top level is also covered, so all maximal elements share a rank.
pub fn random_ranked_poset<R: Rng>(rng: &mut R, n: usize, graded: bool) -> FinitePoset {
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if levels.is_empty() || rng.gen_bool(0.45) {
            levels.push(vec![v]);
        } else {
            levels.last_mut().expect("nonempty").push(v);
        }
    }
    let mut covers = Vec::new();
    for w in levels.windows(2) {
        let (low, high) = (&w[0], &w[1]);
        for &h in high {
            let mut below: Vec<usize> = low.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if below.is_empty() {
                below.push(low[rng.gen_range(0..low.len())]);
            }
            covers.extend(below.into_iter().map(|l| (l, h)));
        }
        if graded {
            for &l in low {
                if !covers.iter().any(|&(a, _)| a == l) {
                    covers.push((l, high[rng.gen_range(0..high.len())]));
                }
            }
        }
    }
    let names = (0..n).map(|v| format!("p{v}")).collect();
    FinitePoset::from_indices(names, covers).expect("level construction gives a valid poset")
}

/// `P ∪ {0̂, 1̂}` with the two new elements as stars.
pub fn bounded_extension(p: &FinitePoset) -> StarredPoset {
    let taken: HashSet<String> = p.elements.iter().cloned().collect();
    let bot = fresh_name(&taken, "bot");
    let top = fresh_name(&taken, "top");
    let n = p.len();
    let mut elements = vec![bot];
    elements.extend(p.elements.iter().cloned());
    elements.push(top);
    let mut covers: Vec<(usize, usize)> = p.covers.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    covers.extend(p.minimal().into_iter().map(|m| (0, m + 1)));
    covers.extend(p.maximal().into_iter().map(|m| (m + 1, n + 1)));
    if n == 0 {
        covers.push((0, 1));
    }
    let poset = FinitePoset::from_indices(elements, covers).expect("extension of a valid poset");
    let stars = if n == 0 { vec![0] } else { vec![0, n + 1] };
    StarredPoset::new(poset, stars).expect("extension of a valid poset")
}

/// `P ∪ {0̂} ∪ {1̂_m : m maximal}`, all new elements stars.
pub fn max_extension(p: &FinitePoset) -> StarredPoset {
    let mut taken: HashSet<String> = p.elements.iter().cloned().collect();
    let bot = fresh_name(&taken, "bot");
    taken.insert(bot.clone());
    let mut elements = vec![bot];
    elements.extend(p.elements.iter().cloned());
    let mut covers: Vec<(usize, usize)> = p.covers.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    covers.extend(p.minimal().into_iter().map(|m| (0, m + 1)));
    let mut stars = vec![0];
    for m in p.maximal() {
        let name = fresh_name(&taken, &format!("top_{}", p.elements[m]));
        taken.insert(name.clone());
        stars.push(elements.len());
        covers.push((m + 1, elements.len()));
        elements.push(name);
    }
    let poset = FinitePoset::from_indices(elements, covers).expect("extension of a valid poset");
    StarredPoset::new(poset, stars).expect("extension of a valid poset")
}

/// Covers as arrows pointing upward; stars become starred vertices.
pub fn hasse_quiver(sp: &StarredPoset) -> Result<StarredQuiver> {
    if !sp.poset.is_connected() {
        return Err(Error::domain("Hasse diagram is not connected"));
    }
    let map = sp.vertex_map();
    let normal = sp.normal_elements().iter().map(|&v| sp.poset.elements[v].clone()).collect();
    let stars = sp.stars.iter().map(|&v| sp.poset.elements[v].clone()).collect();
    let arrows = sp.poset.covers.iter().map(|&(a, b)| Arrow { tail: map[a], head: map[b] }).collect();
    StarredQuiver::from_parts(normal, stars, arrows, Vec::new())
}

fn unit(dim: usize, i: usize, sign: i64) -> Vec<Int> {
    let mut v = vec![Int::zero(); dim];
    v[i] = Int::from(sign);
    v
}

/// `{f ∈ [0,1]^P : f order-preserving}`, one inequality per cover of the bounded extension.
pub fn order_polytope(p: &FinitePoset) -> HPolytope {
    let n = p.len();
    let mut ineqs = Vec::new();
    for m in p.minimal() {
        ineqs.push(Inequality::new(unit(n, m, 1), Rat::zero()));
    }
    for &(a, b) in &p.covers {
        let mut v = unit(n, b, 1);
        v[a] = Int::from(-1);
        ineqs.push(Inequality::new(v, Rat::zero()));
    }
    for m in p.maximal() {
        ineqs.push(Inequality::new(unit(n, m, -1), Rat::one()));
    }
    HPolytope::new(n, ineqs).expect("dimensions agree")
}

/// Marking of the stars, keyed by element index.
pub type Marking = BTreeMap<usize, Int>;

/// The marked order polytope in coordinates indexed by the normal elements.
pub fn marked_order_polytope(sp: &StarredPoset, marks: &Marking) -> Result<HPolytope> {
    for &s in &sp.stars {
        if !marks.contains_key(&s) {
            return Err(Error::invalid(format!("star {} has no mark", sp.poset.elements[s])));
        }
    }
    if let Some(k) = marks.keys().find(|&&k| !sp.is_star(k)) {
        return Err(Error::invalid(format!("{} is not a star", sp.poset.elements[*k])));
    }
    for &s in &sp.stars {
        for &t in &sp.stars {
            if sp.poset.less(s, t) && marks[&s] > marks[&t] {
                return Err(Error::domain(format!(
                    "marking is not order-preserving: {} < {} but {} > {}",
                    sp.poset.elements[s], sp.poset.elements[t], marks[&s], marks[&t]
                )));
            }
        }
    }
    let map = sp.vertex_map();
    let n = sp.normal_elements().len();
    let mut ineqs = Vec::new();
    for &(a, b) in &sp.poset.covers {
        // f(b) − f(a) ≥ 0 with marks substituted on star endpoints
        let mut normal = vec![Int::zero(); n];
        let mut offset = Int::zero();
        match map[b] {
            Vertex::Normal(j) => normal[j] += Int::one(),
            Vertex::Star(_) => offset += &marks[&b],
        }
        match map[a] {
            Vertex::Normal(i) => normal[i] -= Int::one(),
            Vertex::Star(_) => offset -= &marks[&a],
        }
        ineqs.push(Inequality::new(normal, Rat::from_integer(offset)));
    }
    HPolytope::new(n, ineqs)
}

/// Marks every star with its rank.
pub fn rank_marking(sp: &StarredPoset) -> Result<Marking> {
    let rank = sp.poset.rank_function().ok_or_else(|| not_ranked(&sp.poset))?;
    Ok(sp.stars.iter().map(|&s| (s, Int::from(rank.ranks[s]))).collect())
}

fn not_ranked(p: &FinitePoset) -> Error {
    let hint = match p.rank_status() {
        RankStatus::GeneralizedOnly => " (ranked only in the generalized sense)",
        _ => "",
    };
    Error::domain(format!("poset is not ranked{hint}: maximal chains to some element differ in length"))
}

/// The rank-marked order polytope translated so its interior lattice point is the origin.
///
/// Every inequality comes out as `⟨L, F⟩ + 1 ≥ 0`.
pub fn shifted_marked_order(sp: &StarredPoset) -> Result<HPolytope> {
    let marks = rank_marking(sp)?;
    let rank = sp.poset.rank_function().expect("checked by rank_marking");
    let polytope = marked_order_polytope(sp, &marks)?;
    let u: Vec<Rat> = sp.normal_elements().iter().map(|&v| Rat::from_integer(Int::from(rank.ranks[v]))).collect();
    Ok(polytope.translate_back(&u))
}

/// The interior lattice point of the rank-marked order polytope: the ranks of the normal elements.
pub fn rank_point(sp: &StarredPoset) -> Result<Vec<Int>> {
    let rank = sp.poset.rank_function().ok_or_else(|| not_ranked(&sp.poset))?;
    Ok(sp.normal_elements().iter().map(|&v| Int::from(rank.ranks[v])).collect())
}
