//! Correlators of `R.(Tω)` as a sum over stable graphs.
//!
//! For a graph `Γ` every leg carries `R(ψ)` applied to its inserted vector,
//! every edge the kernel `Δ(ψ', ψ'')`, and every vertex the topological
//! part evaluated on its incoming vectors and on the translation `T`,
//! with the extra `T`-markings forgotten. Since the topological part is a
//! product `ε(w_1 • ⋯ • w_k • H^g)`, a vertex is a linear functional of the
//! product of its inputs, and the graph value folds up a spanning tree.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;
use rayon::prelude::*;

use crate::arith::{Matrix, Rational, Ring};
use crate::cohft::{EdgeKernel, FrobeniusData, RMatrix, TSeries};
use crate::correlators::{forgetful_pushforward, integrate_kappa_poly};
use crate::error::{Error, Result};
use crate::graphs::{stable_graphs, GraphClass};

/// One marking: an inserted vector and an extra ψ power.
#[derive(Clone, Debug, PartialEq)]
pub struct Insertion<C: Ring = Rational> {
    pub vector: Vec<C>,
    pub psi: u32,
}

impl<C: Ring> Insertion<C> {
    pub fn new(vector: Vec<C>, psi: u32) -> Self {
        Insertion { vector, psi }
    }
}

/// A semisimple CohFT given by its topological part and an R-matrix.
#[derive(Clone, Debug)]
pub struct Theory<C: Ring = Rational> {
    pub frobenius: FrobeniusData<C>,
    pub rmatrix: RMatrix<C>,
}

/// Graph-sum evaluator for one theory. Vertex weights are memoized across
/// requests.
pub struct Engine<C: Ring = Rational> {
    frob: FrobeniusData<C>,
    r: RMatrix<C>,
    kernel: EdgeKernel<C>,
    t: TSeries<C>,
    /// `Δ_{p,q} η` and `Δ_{p,q}ᵀ η`, indexed like the kernel
    fold_right: Vec<Vec<Matrix<C>>>,
    fold_left: Vec<Vec<Matrix<C>>>,
    /// `Σ Δ_{p,q}^{μν} e_μ • e_ν`
    loop_vec: Vec<Vec<Vec<C>>>,
    vertex_memo: DashMap<(u32, Vec<u32>), Arc<Vec<C>>>,
}

impl<C: Ring> Engine<C> {
    pub fn new(theory: Theory<C>) -> Result<Self> {
        let Theory { frobenius: frob, rmatrix: r } = theory;
        if r.dim() != frob.dim() {
            return Err(Error::InvalidTheory(format!(
                "R-matrix is {}x{} but V has dimension {}",
                r.dim(),
                r.dim(),
                frob.dim()
            )));
        }
        r.check_symplectic(frob.eta_inv())?;
        let kernel = EdgeKernel::new(&r, frob.eta_inv())?;
        let t = r.unit_translation(&frob.unit())?;
        let d = frob.dim();
        let ko = kernel.order();
        let mut fold_right = Vec::new();
        let mut fold_left = Vec::new();
        let mut loop_vec = Vec::new();
        for p in 0..=ko {
            let (mut fr, mut fl, mut lv) = (Vec::new(), Vec::new(), Vec::new());
            for q in 0..=ko - p {
                let delta = kernel.get(p, q).expect("in range");
                fr.push(delta.mul(frob.eta())?);
                fl.push(delta.transpose().mul(frob.eta())?);
                let mut v = vec![C::zero(); d];
                for mu in 0..d {
                    for nu in 0..d {
                        let c = delta.get(mu, nu);
                        if c.is_zero() {
                            continue;
                        }
                        for (x, m) in v.iter_mut().zip(frob.basis_product(mu, nu)) {
                            x.add_assign_ref(&c.times(m));
                        }
                    }
                }
                lv.push(v);
            }
            fold_right.push(fr);
            fold_left.push(fl);
            loop_vec.push(lv);
        }
        Ok(Engine { frob, r, kernel, t, fold_right, fold_left, loop_vec, vertex_memo: DashMap::new() })
    }

    pub fn frobenius(&self) -> &FrobeniusData<C> {
        &self.frob
    }

    pub fn rmatrix(&self) -> &RMatrix<C> {
        &self.r
    }

    pub fn kernel(&self) -> &EdgeKernel<C> {
        &self.kernel
    }

    pub fn translation(&self) -> &TSeries<C> {
        &self.t
    }

    /// `∫_{M̄_{g,n}} Ω_{g,n}(v_1, …, v_n) Π ψ_i^{a_i}`.
    pub fn correlator(&self, g: u32, insertions: &[Insertion<C>]) -> Result<C> {
        self.check_request(g, insertions)?;
        let graphs = stable_graphs(g, insertions.len())?;
        self.sum_graphs(g, insertions, &graphs)
    }

    /// Same sum restricted to the given graphs (which must be of type
    /// `(g, n)`).
    pub fn correlator_over(&self, g: u32, insertions: &[Insertion<C>], graphs: &[GraphClass]) -> Result<C> {
        self.check_request(g, insertions)?;
        for c in graphs {
            c.graph.validate(g, insertions.len())?;
        }
        self.sum_graphs(g, insertions, graphs)
    }

    /// Contribution of each graph, in input order.
    pub fn graph_contributions(&self, g: u32, insertions: &[Insertion<C>], graphs: &[GraphClass]) -> Result<Vec<C>> {
        self.check_request(g, insertions)?;
        graphs.par_iter().map(|c| self.graph_value(c, insertions)).collect()
    }

    fn check_request(&self, g: u32, insertions: &[Insertion<C>]) -> Result<()> {
        let n = insertions.len();
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::UnstablePair { g, n });
        }
        if let Some(bad) = insertions.iter().find(|i| i.vector.len() != self.frob.dim()) {
            return Err(Error::Range(format!(
                "inserted vector has length {}, expected {}",
                bad.vector.len(),
                self.frob.dim()
            )));
        }
        let need = (3 * g as usize + n).saturating_sub(3);
        if self.r.order() < need {
            return Err(Error::InsufficientOrder { have: self.r.order(), need });
        }
        Ok(())
    }

    fn sum_graphs(&self, _g: u32, insertions: &[Insertion<C>], graphs: &[GraphClass]) -> Result<C> {
        let parts: Vec<C> = graphs.par_iter().map(|c| self.graph_value(c, insertions)).collect::<Result<_>>()?;
        let mut acc = C::zero();
        for p in &parts {
            acc.add_assign_ref(p);
        }
        Ok(acc)
    }

    /// `Φ(g, d) = Σ_m 1/m! Σ_k (∫ ψ^d p_{m*} Π ψ^{k_j}) T_{k_1} • ⋯ • T_{k_m} • H^g`.
    fn vertex_weight(&self, g: u32, degrees: &[u32]) -> Result<Arc<Vec<C>>> {
        let key = (g, degrees.to_vec());
        if let Some(hit) = self.vertex_memo.get(&key) {
            return Ok(hit.clone());
        }
        let n = degrees.len();
        let dim = 3 * g as i64 - 3 + n as i64;
        let gap = dim - degrees.iter().map(|&x| x as i64).sum::<i64>();
        let d = self.frob.dim();
        let mut acc = vec![C::zero(); d];
        if gap >= 0 {
            let mut parts = Vec::new();
            partitions(gap as u32, gap as u32, &mut parts, &mut |lambda| -> Result<()> {
                let ks: Vec<u32> = lambda.iter().map(|&l| l + 1).collect();
                let mut prod = self.frob.unit();
                for &k in &ks {
                    match self.t.get(k as usize) {
                        Some(tk) => prod = self.frob.product(&prod, tk),
                        None => return Ok(()),
                    }
                    if prod.iter().all(Ring::is_zero) {
                        return Ok(());
                    }
                }
                let integral = if ks.is_empty() {
                    integrate_kappa_poly(g, degrees, &BTreeMap::from([(Vec::new(), Rational::one())]))?
                } else {
                    integrate_kappa_poly(g, degrees, &forgetful_pushforward(&ks)?)?
                };
                if integral.is_zero() {
                    return Ok(());
                }
                let mut weight = integral;
                let mut run = 1u32;
                for i in 1..lambda.len() {
                    if lambda[i] == lambda[i - 1] {
                        run += 1;
                        weight = weight / Rational::from(run);
                    } else {
                        run = 1;
                    }
                }
                for (a, p) in acc.iter_mut().zip(&prod) {
                    if !p.is_zero() {
                        a.add_assign_ref(&p.scaled(&weight));
                    }
                }
                Ok(())
            })?;
            for _ in 0..g {
                acc = self.frob.product(&acc, self.frob.handle());
            }
        }
        let acc = Arc::new(acc);
        self.vertex_memo.insert(key, acc.clone());
        Ok(acc)
    }

    fn graph_value(&self, class: &GraphClass, insertions: &[Insertion<C>]) -> Result<C> {
        let plan = GraphPlan::new(class);
        let nv = plan.genera.len();
        let d = self.frob.dim();
        // R_k v_l for every leg and useful k
        let leg_vecs: Vec<Vec<Vec<C>>> = insertions
            .iter()
            .zip(&class.graph.legs().to_vec())
            .map(|(ins, &v)| {
                let max_k = (plan.dims[v] - ins.psi as i64).max(-1);
                (0..=max_k)
                    .map(|k| self.r.coeff(k as usize).mul_vec(&ins.vector))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut state = DfsState {
            used: vec![0i64; nv],
            degrees: vec![Vec::new(); nv],
            leg_k: vec![0; insertions.len()],
            edge_pq: vec![(0, 0); plan.edges.len()],
            total: C::zero(),
        };
        self.dfs_legs(&plan, insertions, &leg_vecs, 0, &mut state)?;
        let _ = d;
        Ok(state.total.scaled(&Rational::frac(1, class.aut as i64)))
    }

    fn dfs_legs(
        &self,
        plan: &GraphPlan,
        insertions: &[Insertion<C>],
        leg_vecs: &[Vec<Vec<C>>],
        l: usize,
        st: &mut DfsState<C>,
    ) -> Result<()> {
        if l == insertions.len() {
            return self.dfs_edges(plan, leg_vecs, 0, st);
        }
        let v = plan.legs[l];
        let a = insertions[l].psi as i64;
        for (k, vec) in leg_vecs[l].iter().enumerate() {
            if st.used[v] + a + k as i64 > plan.dims[v] {
                break;
            }
            if vec.iter().all(Ring::is_zero) {
                continue;
            }
            let deg = a + k as i64;
            st.used[v] += deg;
            st.degrees[v].push(deg as u32);
            st.leg_k[l] = k;
            self.dfs_legs(plan, insertions, leg_vecs, l + 1, st)?;
            st.degrees[v].pop();
            st.used[v] -= deg;
        }
        Ok(())
    }

    fn dfs_edges(&self, plan: &GraphPlan, leg_vecs: &[Vec<Vec<C>>], e: usize, st: &mut DfsState<C>) -> Result<()> {
        if e == plan.edges.len() {
            let value = self.evaluate(plan, leg_vecs, st)?;
            st.total.add_assign_ref(&value);
            return Ok(());
        }
        let (a, b) = plan.edges[e];
        let ko = self.kernel.order() as i64;
        for p in 0..=ko {
            if st.used[a] + p > plan.dims[a] {
                break;
            }
            st.used[a] += p;
            for q in 0..=ko - p {
                if st.used[b] + q > plan.dims[b] {
                    break;
                }
                if self.kernel.get(p as usize, q as usize).is_none_or(Matrix::is_zero) {
                    continue;
                }
                st.used[b] += q;
                st.degrees[a].push(p as u32);
                st.degrees[b].push(q as u32);
                st.edge_pq[e] = (p as usize, q as usize);
                self.dfs_edges(plan, leg_vecs, e + 1, st)?;
                st.degrees[b].pop();
                st.degrees[a].pop();
                st.used[b] -= q;
            }
            st.used[a] -= p;
        }
        Ok(())
    }

    fn evaluate(&self, plan: &GraphPlan, leg_vecs: &[Vec<Vec<C>>], st: &DfsState<C>) -> Result<C> {
        let nv = plan.genera.len();
        let mut y: Vec<Vec<C>> = Vec::with_capacity(nv);
        for v in 0..nv {
            let mut degs = st.degrees[v].clone();
            degs.sort_unstable();
            let phi = self.vertex_weight(plan.genera[v], &degs)?;
            if phi.iter().all(Ring::is_zero) {
                return Ok(C::zero());
            }
            y.push(phi.as_ref().clone());
        }
        for (l, &v) in plan.legs.iter().enumerate() {
            y[v] = self.frob.product(&y[v], &leg_vecs[l][st.leg_k[l]]);
        }
        for &e in &plan.loops {
            let (p, q) = st.edge_pq[e];
            let v = plan.edges[e].0;
            y[v] = self.frob.product(&y[v], &self.loop_vec[p][q]);
        }
        for yv in &y {
            if yv.iter().all(Ring::is_zero) {
                return Ok(C::zero());
            }
        }
        if plan.extra.is_empty() {
            return Ok(self.fold(plan, st, y));
        }
        // expand the remaining cycle edges over the basis index on their first end
        let d = self.frob.dim();
        let mut total = C::zero();
        let count = d.pow(plan.extra.len() as u32);
        for code in 0..count {
            let mut yy = y.clone();
            let mut c = code;
            let mut dead = false;
            for &e in &plan.extra {
                let mu = c % d;
                c /= d;
                let (a, b) = plan.edges[e];
                let (p, q) = st.edge_pq[e];
                let delta = self.kernel.get(p, q).expect("in range");
                let row = delta.row(mu);
                if row.iter().all(Ring::is_zero) {
                    dead = true;
                    break;
                }
                yy[a] = self.frob.product(&yy[a], &self.frob.basis(mu));
                yy[b] = self.frob.product(&yy[b], row);
            }
            if !dead {
                total.add_assign_ref(&self.fold(plan, st, yy));
            }
        }
        Ok(total)
    }

    fn fold(&self, plan: &GraphPlan, st: &DfsState<C>, mut y: Vec<Vec<C>>) -> C {
        for &(child, parent, e, child_is_second) in &plan.post_order {
            let (p, q) = st.edge_pq[e];
            let m = if child_is_second { &self.fold_right[p][q] } else { &self.fold_left[p][q] };
            let k = m.mul_vec(&y[child]).expect("square");
            y[parent] = self.frob.product(&y[parent], &k);
        }
        self.frob.counit(&y[plan.root])
    }
}

struct DfsState<C: Ring> {
    used: Vec<i64>,
    degrees: Vec<Vec<u32>>,
    leg_k: Vec<usize>,
    edge_pq: Vec<(usize, usize)>,
    total: C,
}

/// Spanning-tree layout of a graph.
struct GraphPlan {
    genera: Vec<u32>,
    dims: Vec<i64>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
    /// non-loop edges outside the tree
    extra: Vec<usize>,
    /// (child, parent, edge, child is the edge's second end), leaves first
    post_order: Vec<(usize, usize, usize, bool)>,
    root: usize,
}

impl GraphPlan {
    fn new(class: &GraphClass) -> Self {
        let g = &class.graph;
        let nv = g.num_vertices();
        let val = g.valences();
        let dims = (0..nv).map(|v| 3 * g.genera()[v] as i64 - 3 + val[v] as i64).collect();
        let edges = g.edges().to_vec();
        let loops = (0..edges.len()).filter(|&e| edges[e].0 == edges[e].1).collect();
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; edges.len()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for (e, &(a, b)) in edges.iter().enumerate() {
                if a == b || in_tree[e] {
                    continue;
                }
                let other = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    in_tree[e] = true;
                    order.push((other, u, e, other == b));
                    queue.push_back(other);
                }
            }
        }
        order.reverse();
        let extra = (0..edges.len()).filter(|&e| edges[e].0 != edges[e].1 && !in_tree[e]).collect();
        GraphPlan {
            genera: g.genera().to_vec(),
            dims,
            legs: g.legs().to_vec(),
            edges,
            loops,
            extra,
            post_order: order,
            root: 0,
        }
    }
}

/// Partitions of `n` into parts `<= max`, parts in weakly decreasing order.
fn partitions<E>(n: u32, max: u32, parts: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> Result<(), E>) -> Result<(), E> {
    if n == 0 {
        return f(parts);
    }
    for p in (1..=max.min(n)).rev() {
        parts.push(p);
        partitions(n - p, p, parts, f)?;
        parts.pop();
    }
    Ok(())
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Correlators of basis insertions, cached by `(g, [(basis index, ψ)])`.
struct BasisCorrelators<'a, C: Ring> {
    engine: &'a Engine<C>,
    unit: Vec<C>,
    cache: HashMap<(u32, Vec<(usize, u32)>), C>,
}

impl<'a, C: Ring> BasisCorrelators<'a, C> {
    fn new(engine: &'a Engine<C>) -> Self {
        BasisCorrelators { engine, unit: engine.frobenius().unit(), cache: HashMap::new() }
    }

    /// Index `d` stands for the unit.
    fn get(&mut self, g: u32, key: &[(usize, u32)]) -> Result<C> {
        let k = (g, key.to_vec());
        if let Some(v) = self.cache.get(&k) {
            return Ok(v.clone());
        }
        let d = self.engine.frobenius().dim();
        let ins: Vec<Insertion<C>> = key
            .iter()
            .map(|&(b, a)| {
                let v = if b == d { self.unit.clone() } else { self.engine.frobenius().basis(b) };
                Insertion::new(v, a)
            })
            .collect();
        let v = self.engine.correlator(g, &ins)?;
        self.cache.insert(k, v.clone());
        Ok(v)
    }
}

/// String and dilaton identities on reconstructed correlators, over basis
/// insertions with `g <= max_g` and at most `max_n` markings on the larger
/// side.
pub fn cohft_axiom_suite<C: Ring>(engine: &Engine<C>, max_g: u32, max_n: usize) -> Result<Vec<AxiomCheck>> {
    let d = engine.frobenius().dim();
    let mut corr = BasisCorrelators::new(engine);
    let mut checks = Vec::new();
    for g in 0..=max_g {
        for n in 0..max_n {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g as i64 - 3 + n as i64;
            for basis in index_tuples(d, n) {
                // ψ exponents summing to dim + 1 (string) or dim (dilaton)
                for psis in psi_tuples(n, dim + 1) {
                    let key: Vec<(usize, u32)> = basis.iter().copied().zip(psis.iter().copied()).collect();
                    let mut big = key.clone();
                    big.push((d, 0));
                    let lhs = corr.get(g, &big)?;
                    let mut rhs = C::zero();
                    for j in 0..n {
                        if key[j].1 > 0 {
                            let mut lowered = key.clone();
                            lowered[j].1 -= 1;
                            rhs.add_assign_ref(&corr.get(g, &lowered)?);
                        }
                    }
                    checks.push(AxiomCheck {
                        name: "string".into(),
                        passed: lhs == rhs,
                        detail: format!("g={g} basis={basis:?} psi={psis:?}: {lhs:?} vs {rhs:?}"),
                    });
                }
                for psis in psi_tuples(n, dim) {
                    let key: Vec<(usize, u32)> = basis.iter().copied().zip(psis.iter().copied()).collect();
                    let mut big = key.clone();
                    big.push((d, 1));
                    let lhs = corr.get(g, &big)?;
                    let rhs = corr.get(g, &key)?.scaled(&Rational::from(2 * g as i64 - 2 + n as i64));
                    checks.push(AxiomCheck {
                        name: "dilaton".into(),
                        passed: lhs == rhs,
                        detail: format!("g={g} basis={basis:?} psi={psis:?}: {lhs:?} vs {rhs:?}"),
                    });
                }
            }
        }
    }
    Ok(checks)
}

/// Invariance of basis correlators under cyclically rotating the markings,
/// for `2 <= n <= max_n`.
pub fn symmetry_checks<C: Ring>(engine: &Engine<C>, max_g: u32, max_n: usize) -> Result<Vec<AxiomCheck>> {
    let d = engine.frobenius().dim();
    let mut corr = BasisCorrelators::new(engine);
    let mut checks = Vec::new();
    for g in 0..=max_g {
        for n in 2..=max_n {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g as i64 - 3 + n as i64;
            for basis in index_tuples(d, n) {
                for psis in psi_tuples(n, dim) {
                    let key: Vec<(usize, u32)> = basis.iter().copied().zip(psis.iter().copied()).collect();
                    if key.windows(2).all(|w| w[0] == w[1]) {
                        continue;
                    }
                    let mut rotated = key.clone();
                    rotated.rotate_left(1);
                    let lhs = corr.get(g, &key)?;
                    let rhs = corr.get(g, &rotated)?;
                    checks.push(AxiomCheck {
                        name: "symmetry".into(),
                        passed: lhs == rhs,
                        detail: format!("g={g} basis={basis:?} psi={psis:?}"),
                    });
                }
            }
        }
    }
    Ok(checks)
}

/// Non-decreasing index tuples of length `n` from `0..d`.
fn index_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(d: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(d, n, i, cur, out);
            cur.pop();
        }
    }
    rec(d, n, 0, &mut cur, &mut out);
    out
}

/// All exponent tuples of length `n` with the given sum.
fn psi_tuples(n: usize, total: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let mut cur = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, total as u32, &mut cur, &mut out);
    out
}
