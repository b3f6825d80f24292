//! Stable graphs of genus `g` with `n` labeled legs.
//!
//! Graphs are generated from the smooth one-vertex graph by repeated
//! degeneration (drop a vertex genus and add a self-loop, or split a vertex
//! along a new edge) and deduplicated by a canonical vertex labeling.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A stable graph in compact form: vertex genera, the vertex carrying each
/// marking, and an edge list with `a <= b` (self-loops have `a == b`).
///
/// Half-edges are numbered legs first (`0..n`), then two per edge in list
/// order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Canonical representative of an isomorphism class with its automorphism
/// count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphClass {
    pub graph: StableGraph,
    pub aut: u64,
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = genera.len();
        if nv == 0 {
            return Err(Error::Range("graph without vertices".into()));
        }
        if legs.iter().chain(edges.iter().flat_map(|(a, b)| [a, b])).any(|&v| v >= nv) {
            return Err(Error::Range("vertex index out of range".into()));
        }
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        Ok(StableGraph { genera, legs, edges })
    }

    /// The smooth graph: one vertex of genus `g` carrying all `n` legs.
    pub fn smooth(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: Vec::new() }
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn h1(&self) -> usize {
        self.edges.len() + 1 - self.genera.len()
    }

    pub fn genus(&self) -> u32 {
        self.genera.iter().sum::<u32>() + self.h1() as u32
    }

    /// Number of half-edges (legs and edge ends) at each vertex.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.num_vertices()];
        for &v in &self.legs {
            val[v] += 1;
        }
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// Vertex of every half-edge.
    pub fn half_vertex(&self) -> Vec<usize> {
        let mut hv = self.legs.clone();
        for &(a, b) in &self.edges {
            hv.push(a);
            hv.push(b);
        }
        hv
    }

    /// The half-edge involution; legs are its fixed points.
    pub fn involution(&self) -> Vec<usize> {
        let n = self.num_legs();
        let mut inv: Vec<usize> = (0..n).collect();
        for e in 0..self.num_edges() {
            inv.push(n + 2 * e + 1);
            inv.push(n + 2 * e);
        }
        inv
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (0..nv).all(|v| find(&mut parent, v) == root)
    }

    pub fn is_stable(&self) -> bool {
        self.genera
            .iter()
            .zip(self.valences())
            .all(|(&g, n)| 2 * g as i64 - 2 + n as i64 > 0)
    }

    /// Check connectivity, stability and the genus identity.
    pub fn validate(&self, g: u32, n: usize) -> Result<()> {
        if self.num_legs() != n {
            return Err(Error::Range(format!("graph has {} legs, expected {n}", self.num_legs())));
        }
        if !self.is_connected() {
            return Err(Error::Range("graph is not connected".into()));
        }
        if !self.is_stable() {
            return Err(Error::Range("graph has an unstable vertex".into()));
        }
        if self.genus() != g {
            return Err(Error::Range(format!("graph has genus {}, expected {g}", self.genus())));
        }
        Ok(())
    }

    /// Vertex colors from iterated neighbourhood refinement; automorphisms
    /// preserve them.
    fn refined_colors(&self) -> Vec<usize> {
        let nv = self.num_vertices();
        let val = self.valences();
        let mut legs_at = vec![Vec::new(); nv];
        for (i, &v) in self.legs.iter().enumerate() {
            legs_at[v].push(i);
        }
        let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); nv];
        for &(a, b) in &self.edges {
            if a != b {
                *adj[a].entry(b).or_default() += 1;
                *adj[b].entry(a).or_default() += 1;
            }
        }
        let initial: Vec<_> = (0..nv)
            .map(|v| (self.genera[v], legs_at[v].clone(), self.loops_at(v), val[v]))
            .collect();
        let mut colors = rank(&initial);
        loop {
            let sigs: Vec<_> = (0..nv)
                .map(|v| {
                    let mut nb: Vec<(usize, usize)> =
                        adj[v].iter().map(|(&u, &m)| (colors[u], m)).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let count = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
            if count(&next) == count(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn relabeled(&self, new_label: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.num_vertices()];
        for (v, &nl) in new_label.iter().enumerate() {
            genera[nl] = self.genera[v];
        }
        let legs = self.legs.iter().map(|&v| new_label[v]).collect();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (new_label[a], new_label[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        StableGraph { genera, legs, edges }
    }

    /// Canonical relabeling together with the number of vertex
    /// permutations that fix the graph.
    fn canonical_with_vertex_aut(&self) -> (StableGraph, u64) {
        let colors = self.refined_colors();
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            classes.entry(c).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<StableGraph> = None;
        let mut hits = 0u64;
        let mut order: Vec<usize> = Vec::with_capacity(self.num_vertices());
        let mut label = vec![0; self.num_vertices()];
        self.search(&classes, 0, &mut order, &mut label, &mut best, &mut hits);
        (best.expect("at least one labeling"), hits)
    }

    fn search(
        &self,
        classes: &[Vec<usize>],
        ci: usize,
        order: &mut Vec<usize>,
        label: &mut [usize],
        best: &mut Option<StableGraph>,
        hits: &mut u64,
    ) {
        if ci == classes.len() {
            for (pos, &v) in order.iter().enumerate() {
                label[v] = pos;
            }
            let cand = self.relabeled(label);
            match best {
                Some(b) if cand > *b => {}
                Some(b) if cand == *b => *hits += 1,
                _ => {
                    *best = Some(cand);
                    *hits = 1;
                }
            }
            return;
        }
        permute(&classes[ci], &mut |perm| {
            let base = order.len();
            order.extend_from_slice(perm);
            self.search(classes, ci + 1, order, label, best, hits);
            order.truncate(base);
        });
    }

    /// Canonical representative of the isomorphism class.
    pub fn canonical(&self) -> StableGraph {
        self.canonical_with_vertex_aut().0
    }

    /// Order of the automorphism group: vertex permutations, permutations of
    /// parallel edges and flips and permutations of self-loops, with legs
    /// fixed.
    pub fn automorphism_count(&self) -> u64 {
        let (_, vertex_aut) = self.canonical_with_vertex_aut();
        let mut mult: HashMap<(usize, usize), u64> = HashMap::new();
        for &e in &self.edges {
            *mult.entry(e).or_default() += 1;
        }
        mult.iter().fold(vertex_aut, |acc, (&(a, b), &m)| {
            let f = factorial(m);
            if a == b {
                acc * f * (1 << m)
            } else {
                acc * f
            }
        })
    }

    /// All graphs obtained by one degeneration step.
    fn degenerations(&self) -> Vec<StableGraph> {
        let mut out = Vec::new();
        for v in 0..self.num_vertices() {
            if self.genera[v] > 0 {
                let mut g = self.clone();
                g.genera[v] -= 1;
                g.edges.push((v, v));
                out.push(g);
            }
            self.splits(v, &mut out);
        }
        out
    }

    fn splits(&self, v: usize, out: &mut Vec<StableGraph>) {
        // half-edges at v: (0, leg index) or (1, edge index, side)
        let mut halves: Vec<(bool, usize, u8)> = Vec::new();
        for (i, &lv) in self.legs.iter().enumerate() {
            if lv == v {
                halves.push((true, i, 0));
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                halves.push((false, e, 0));
            }
            if b == v {
                halves.push((false, e, 1));
            }
        }
        let h = halves.len();
        let gv = self.genera[v];
        let new_v = self.num_vertices();
        for mask in 0u64..(1 << h) {
            let n2 = mask.count_ones() as i64 + 1;
            let n1 = h as i64 - n2 + 2;
            for g1 in 0..=gv {
                let g2 = gv - g1;
                if 2 * g1 as i64 - 2 + n1 <= 0 || 2 * g2 as i64 - 2 + n2 <= 0 {
                    continue;
                }
                let mut g = self.clone();
                g.genera[v] = g1;
                g.genera.push(g2);
                for (k, &(is_leg, idx, side)) in halves.iter().enumerate() {
                    if mask & (1 << k) == 0 {
                        continue;
                    }
                    if is_leg {
                        g.legs[idx] = new_v;
                    } else if side == 0 {
                        g.edges[idx].0 = new_v;
                    } else {
                        g.edges[idx].1 = new_v;
                    }
                }
                for e in g.edges.iter_mut() {
                    *e = (e.0.min(e.1), e.0.max(e.1));
                }
                g.edges.push((v, new_v));
                out.push(g);
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.genera,
            "edges": self.edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "legs": self.legs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("graph JSON: bad or missing {what:?}"));
        let ints = |key: &str| -> Result<Vec<u64>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad(key)))
                .collect()
        };
        let genera = ints("vertices")?.into_iter().map(|g| g as u32).collect();
        let legs = ints("legs")?.into_iter().map(|l| l as usize).collect();
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("edges"))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                    (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                    _ => Err(bad("edges")),
                },
                _ => Err(bad("edges")),
            })
            .collect::<Result<Vec<_>>>()?;
        StableGraph::new(genera, legs, edges)
    }
}

impl GraphClass {
    pub fn from_graph(g: &StableGraph) -> Self {
        let graph = g.canonical();
        let aut = graph.automorphism_count();
        GraphClass { graph, aut }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.graph.to_json();
        v["aut"] = json!(self.aut);
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(Self::from_graph(&StableGraph::from_json(v)?))
    }
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let sorted: BTreeSet<&T> = items.iter().collect();
    let index: BTreeMap<&T, usize> = sorted.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    items.iter().map(|t| index[t]).collect()
}

fn permute(items: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn rec(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            rec(a, k + 1, f);
            a.swap(k, i);
        }
    }
    rec(&mut items.to_vec(), 0, f);
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// All stable graphs of genus `g` with `n` legs, up to isomorphism, sorted
/// by edge count and then canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Vec<GraphClass>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstablePair { g, n });
    }
    let mut all = vec![StableGraph::smooth(g, n)];
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let next: BTreeSet<StableGraph> = frontier
            .par_iter()
            .flat_map_iter(|gr| gr.degenerations().into_iter().map(|d| d.canonical()))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        frontier = next.into_iter().collect();
        all.extend(frontier.iter().cloned());
    }
    Ok(all
        .into_par_iter()
        .map(|graph| {
            let aut = graph.automorphism_count();
            GraphClass { graph, aut }
        })
        .collect())
}

/// Memoized [`enumerate_stable_graphs`].
pub fn stable_graphs(g: u32, n: usize) -> Result<Arc<Vec<GraphClass>>> {
    static CACHE: OnceLock<DashMap<(u32, usize), Arc<Vec<GraphClass>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(hit) = cache.get(&(g, n)) {
        return Ok(hit.clone());
    }
    let list = Arc::new(enumerate_stable_graphs(g, n)?);
    cache.insert((g, n), list.clone());
    Ok(list)
}

/// Graphs in which every vertex has even valence.
pub fn even_subset(graphs: &[GraphClass]) -> Vec<GraphClass> {
    graphs
        .iter()
        .filter(|c| c.graph.valences().iter().all(|v| v % 2 == 0))
        .cloned()
        .collect()
}
