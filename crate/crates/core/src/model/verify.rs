use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graph::*;
use super::ModelError;

/// Bumped whenever a field of [`AdjunctionReport`] changes meaning.
pub const MODEL_SCHEMA: u32 = 1;

const HOM_LIMIT: u64 = 1 << 20;
const RANDOM_GRAPHS: usize = 12;
const MAX_VERTICES: usize = 3;
const MAX_EXTRA_EDGES: usize = 4;

/// Deliberate defects, for checking that the verifier notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `nabla` drops its diagonal edges, leaving no reflexivity loops.
    NablaMissingDiagonalRefl,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyParams {
    pub max_vertices: usize,
    /// Extra edges per graph in the seeded random family; 0 disables it.
    pub max_extra_edges: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            max_vertices: 3,
            max_extra_edges: 0,
            seed: 0,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedGraph {
    pub role: String,
    pub graph: ReflGraph,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub description: String,
    pub graphs: Vec<NamedGraph>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    pub instances: u64,
    pub checks: u64,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyStats {
    pub graphs: usize,
    pub morphisms: usize,
    pub max_set_size: usize,
    pub random_graphs: usize,
    pub random_morphisms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjunctionReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub params: VerifyParams,
    pub family: FamilyStats,
    pub sections: Vec<Section>,
    pub passed: bool,
}

impl AdjunctionReport {
    pub fn failures(&self) -> usize {
        self.sections.iter().filter(|s| !s.passed).count()
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render_table(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "model verification (schema {}, cohtt {}): max vertices {}, max extra edges {}, seed {}\n",
            self.schema, self.tool_version, p.max_vertices, p.max_extra_edges, p.seed
        );
        let f = &self.family;
        let _ = writeln!(
            out,
            "family: {} graphs, {} morphisms; random: {} graphs, {} morphisms",
            f.graphs, f.morphisms, f.random_graphs, f.random_morphisms
        );
        for s in &self.sections {
            let _ = writeln!(
                out,
                "  {:34} {:>9} instances {:>10} checks  {}",
                s.name,
                s.instances,
                s.checks,
                if s.passed { "ok" } else { "FAILED" }
            );
            if let Some(c) = &s.counterexample {
                let _ = writeln!(out, "    counterexample: {}", c.description);
                for g in &c.graphs {
                    let json = serde_json::to_string(&g.graph).expect("graph serializes");
                    let _ = writeln!(out, "      {}: {}", g.role, json);
                }
            }
        }
        let _ = writeln!(out, "{} failures", self.failures());
        out
    }
}

/// All reflexive graphs on the vertices `0..n` with at most one edge between
/// each ordered pair of distinct vertices, ordered by edge count.
pub fn simple_graphs(n: usize) -> Vec<ReflGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut masks: Vec<u64> = (0..1u64 << pairs.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
        .into_iter()
        .map(|mask| {
            let mut g = delta(&FinSet::new((0..n).map(|i| i.to_string())).expect("distinct"));
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g.add_edge(a, b);
                }
            }
            g
        })
        .collect()
}

/// Graphs with their pairwise hom-sets, enumerated once.
struct Family {
    graphs: Vec<ReflGraph>,
    adj: Vec<Vec<Vec<usize>>>,
    homs: Vec<Vec<GraphMor>>,
    is_e: Vec<Vec<bool>>,
    is_m: Vec<Vec<bool>>,
    e_list: Vec<Vec<usize>>,
    m_list: Vec<Vec<usize>>,
    /// Closed under the factorization, so every factorization has a copy here.
    closed: bool,
}

impl Family {
    fn new(graphs: Vec<ReflGraph>, closed: bool) -> Result<Family, ModelError> {
        let len = graphs.len();
        let adj = graphs.iter().map(ReflGraph::adjacency).collect();
        let mut homs = Vec::with_capacity(len * len);
        let (mut is_e, mut is_m) = (Vec::new(), Vec::new());
        for x in &graphs {
            for y in &graphs {
                let h = hom_graphs(x, y, HOM_LIMIT)?;
                is_e.push(
                    h.iter()
                        .map(|f| f.is_vertex_bijective(y.vertex_count()))
                        .collect(),
                );
                is_m.push(h.iter().map(|f| locally_bijective(x, y, f)).collect());
                homs.push(h);
            }
        }
        let indices = |flags: &Vec<Vec<bool>>| -> Vec<Vec<usize>> {
            flags
                .iter()
                .map(|fl| {
                    fl.iter()
                        .enumerate()
                        .filter(|(_, &b)| b)
                        .map(|(k, _)| k)
                        .collect()
                })
                .collect()
        };
        let (e_list, m_list) = (indices(&is_e), indices(&is_m));
        Ok(Family {
            graphs,
            adj,
            homs,
            is_e,
            is_m,
            e_list,
            m_list,
            closed,
        })
    }

    fn len(&self) -> usize {
        self.graphs.len()
    }

    fn hom(&self, i: usize, j: usize) -> &[GraphMor] {
        &self.homs[i * self.len() + j]
    }

    fn morphisms(&self) -> usize {
        self.homs.iter().map(Vec::len).sum()
    }

    /// Index of `f` in `hom(i, j)`; hom-sets are sorted.
    fn position(&self, i: usize, j: usize, f: &GraphMor) -> Option<usize> {
        self.hom(i, j).binary_search(f).ok()
    }

    /// A deterministic, varied choice from `hom(i, j)`.
    fn pick(&self, i: usize, j: usize, salt: usize) -> Option<&GraphMor> {
        let h = self.hom(i, j);
        (!h.is_empty()).then(|| &h[(i * 7 + j * 3 + salt) % h.len()])
    }
}

type Step = Result<(), Counterexample>;

#[derive(Default)]
struct Tally {
    instances: u64,
    checks: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) -> Step {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(cx())
        }
    }
}

fn cx(description: impl Into<String>, graphs: &[(&str, &ReflGraph)]) -> Counterexample {
    Counterexample {
        description: description.into(),
        graphs: graphs
            .iter()
            .map(|(role, g)| NamedGraph {
                role: (*role).to_owned(),
                graph: (*g).clone(),
            })
            .collect(),
    }
}

struct Verifier {
    sections: Vec<Section>,
    aborted: bool,
}

impl Verifier {
    fn run(&mut self, name: &str, f: impl FnOnce(&mut Tally) -> Step) {
        if self.aborted {
            return;
        }
        let mut t = Tally::default();
        let result = f(&mut t);
        self.aborted = result.is_err();
        self.sections.push(Section {
            name: name.to_owned(),
            instances: t.instances,
            checks: t.checks,
            passed: result.is_ok(),
            counterexample: result.err(),
        });
    }
}

fn nabla_with(fault: Option<Fault>, s: &FinSet) -> ReflGraph {
    let mut g = nabla(s);
    if fault == Some(Fault::NablaMissingDiagonalRefl) {
        g.edges.retain(|e| e.src != e.tgt);
        g.refl = vec![g.edges.len(); s.len()];
    }
    g
}

/// `delta h` for a map of sets; loops of a discrete graph share vertex indices.
fn delta_map(h: &[usize]) -> GraphMor {
    GraphMor {
        vmap: h.to_vec(),
        emap: h.to_vec(),
    }
}

/// `nabla h : nabla S -> nabla T` with `|T| = t`.
fn nabla_map(h: &[usize], t: usize) -> GraphMor {
    let s = h.len();
    GraphMor {
        vmap: h.to_vec(),
        emap: (0..s * s).map(|k| h[k / s] * t + h[k % s]).collect(),
    }
}

fn compose_maps(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&i| g[i]).collect()
}

fn homs(x: &ReflGraph, y: &ReflGraph) -> Vec<GraphMor> {
    hom_graphs(x, y, HOM_LIMIT).expect("bounded family stays under the enumeration limit")
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn fully_faithful(t: &mut Tally, n: usize, build: impl Fn(&FinSet) -> ReflGraph) -> Step {
    for s in 0..=n {
        let fs = FinSet::numbered(s);
        let gs = build(&fs);
        t.check(gs.validate().is_ok(), || {
            cx(
                format!(
                    "image of a {s}-element set is not a reflexive graph: {}",
                    gs.validate().unwrap_err()
                ),
                &[("image", &gs)],
            )
        })?;
    }
    for s in 0..=n {
        for u in 0..=n {
            t.instances += 1;
            let (gs, gu) = (build(&FinSet::numbered(s)), build(&FinSet::numbered(u)));
            let vmaps = sorted(homs(&gs, &gu).into_iter().map(|f| f.vmap).collect());
            t.check(vmaps == all_maps(s, u), || {
                cx(
                    format!("graph maps between images of {s}- and {u}-element sets are not the set maps"),
                    &[("source", &gs), ("target", &gu)],
                )
            })?;
        }
    }
    Ok(())
}

fn adjunction_pi_delta(t: &mut Tally, fam: &Family, n: usize) -> Step {
    let comps: Vec<Components> = fam.graphs.iter().map(pi0).collect();
    for (i, x) in fam.graphs.iter().enumerate() {
        let q = &comps[i].quotient;
        let transpose = |phi: &[usize]| GraphMor {
            vmap: q.iter().map(|&c| phi[c]).collect(),
            emap: x.edges.iter().map(|e| phi[q[e.src]]).collect(),
        };
        for s in 0..=n {
            t.instances += 1;
            let ds = delta(&FinSet::numbered(s));
            let maps = all_maps(comps[i].count, s);
            let image: Vec<GraphMor> = maps.iter().map(|phi| transpose(phi)).collect();
            for g in &image {
                t.check(g.is_morphism(x, &ds), || {
                    cx(
                        format!("transpose into a discrete {s}-set is not a morphism"),
                        &[("X", x)],
                    )
                })?;
            }
            t.check(sorted(image) == homs(x, &ds), || {
                cx(
                    format!("maps pi0 X -> S and X -> delta S differ for |S| = {s}"),
                    &[("X", x)],
                )
            })?;
            // naturality in X along some g : X' -> X
            let j = (i + fam.len() - 1) % fam.len();
            if let Some(g) = fam.pick(j, i, s) {
                let pg = pi0_map(&fam.graphs[j], x, g);
                let q2 = &comps[j].quotient;
                let x2 = &fam.graphs[j];
                for phi in &maps {
                    let lhs = GraphMor {
                        vmap: q2.iter().map(|&c| phi[pg[c]]).collect(),
                        emap: x2.edges.iter().map(|e| phi[pg[q2[e.src]]]).collect(),
                    };
                    t.check(lhs == g.then(&transpose(phi)), || {
                        cx("transpose is not natural in X", &[("X'", x2), ("X", x)])
                    })?;
                }
            }
            // naturality in S along some h : S -> S'
            let s2 = (s + 1).min(n);
            if let Some(h) = all_maps(s, s2).into_iter().nth(i % (s2.max(1))) {
                for phi in &maps {
                    let lhs = transpose(&compose_maps(phi, &h));
                    t.check(lhs == transpose(phi).then(&delta_map(&h)), || {
                        cx("transpose is not natural in S", &[("X", x)])
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn adjunction_delta_gamma(t: &mut Tally, fam: &Family, n: usize) -> Step {
    for (i, x) in fam.graphs.iter().enumerate() {
        for s in 0..=n {
            t.instances += 1;
            let ds = delta(&FinSet::numbered(s));
            let hs = homs(&ds, x);
            let maps = all_maps(s, x.vertex_count());
            t.check(
                sorted(hs.iter().map(|f| f.vmap.clone()).collect()) == maps,
                || {
                    cx(
                        format!("maps delta S -> X and S -> gamma X differ for |S| = {s}"),
                        &[("X", x)],
                    )
                },
            )?;
            for sigma in &maps {
                let psi = GraphMor {
                    vmap: sigma.clone(),
                    emap: sigma.iter().map(|&v| x.refl[v]).collect(),
                };
                t.check(hs.binary_search(&psi).is_ok(), || {
                    cx("inverse transpose is not a morphism", &[("X", x)])
                })?;
            }
            let j = (i + 1) % fam.len();
            if let Some(g) = fam.pick(i, j, s) {
                for psi in &hs {
                    t.check(psi.then(g).vmap == compose_maps(&psi.vmap, &g.vmap), || {
                        cx(
                            "transpose is not natural in X",
                            &[("X", x), ("X'", &fam.graphs[j])],
                        )
                    })?;
                }
            }
            let s0 = s.saturating_sub(1);
            if let Some(h) = all_maps(s0, s).into_iter().nth(i % s.max(1)) {
                for psi in &hs {
                    t.check(
                        delta_map(&h).then(psi).vmap == compose_maps(&h, &psi.vmap),
                        || cx("transpose is not natural in S", &[("X", x)]),
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn adjunction_gamma_nabla(t: &mut Tally, fam: &Family, n: usize, fault: Option<Fault>) -> Step {
    for (i, x) in fam.graphs.iter().enumerate() {
        for s in 0..=n {
            t.instances += 1;
            let ns = nabla_with(fault, &FinSet::numbered(s));
            let hs = homs(x, &ns);
            let maps = all_maps(x.vertex_count(), s);
            t.check(
                sorted(hs.iter().map(|f| f.vmap.clone()).collect()) == maps,
                || {
                    cx(
                        format!("maps X -> nabla S and gamma X -> S differ for |S| = {s}"),
                        &[("X", x)],
                    )
                },
            )?;
            for sigma in &maps {
                let psi = GraphMor {
                    vmap: sigma.clone(),
                    emap: x
                        .edges
                        .iter()
                        .map(|e| sigma[e.src] * s + sigma[e.tgt])
                        .collect(),
                };
                t.check(hs.binary_search(&psi).is_ok(), || {
                    cx("inverse transpose is not a morphism", &[("X", x)])
                })?;
            }
            let j = (i + fam.len() - 1) % fam.len();
            if let Some(g) = fam.pick(j, i, s) {
                for psi in &hs {
                    t.check(g.then(psi).vmap == compose_maps(&g.vmap, &psi.vmap), || {
                        cx(
                            "transpose is not natural in X",
                            &[("X'", &fam.graphs[j]), ("X", x)],
                        )
                    })?;
                }
            }
            let s2 = (s + 1).min(n);
            if let Some(h) = all_maps(s, s2).into_iter().nth(i % s2.max(1)) {
                let nh = nabla_map(&h, s2);
                for psi in &hs {
                    t.check(psi.then(&nh).vmap == compose_maps(&psi.vmap, &h), || {
                        cx("transpose is not natural in S", &[("X", x)])
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn pi0_product(t: &mut Tally, fam: &Family) -> Step {
    let comps: Vec<Components> = fam.graphs.iter().map(pi0).collect();
    for (i, x) in fam.graphs.iter().enumerate() {
        for (j, y) in fam.graphs.iter().enumerate() {
            t.instances += 1;
            let p = product(x, y);
            let cp = pi0(&p.graph);
            let (cx_, cy_) = (&comps[i], &comps[j]);
            let mut table = vec![None; cp.count];
            let mut ok = true;
            for v in 0..p.graph.vertex_count() {
                let pair = cx_.quotient[p.pr1.vmap[v]] * cy_.count + cy_.quotient[p.pr2.vmap[v]];
                match table[cp.quotient[v]] {
                    None => table[cp.quotient[v]] = Some(pair),
                    Some(q) => ok &= q == pair,
                }
            }
            let image: Vec<usize> = table.into_iter().flatten().collect();
            ok &= is_bijection(&image, cx_.count * cy_.count);
            t.check(ok, || {
                cx(
                    "pi0 (X x Y) -> pi0 X x pi0 Y is not a bijection",
                    &[("X", x), ("Y", y)],
                )
            })?;
        }
    }
    Ok(())
}

fn reflectors(t: &mut Tally, fam: &Family, n: usize, fault: Option<Fault>) -> Step {
    let one = terminal();
    for s in 0..=n {
        t.instances += 1;
        let fs = FinSet::numbered(s);
        t.check(sharp0(&delta(&fs)) == nabla_with(fault, &fs), || {
            cx(
                "sharp0 of a discrete graph is not codiscrete",
                &[("delta S", &delta(&fs))],
            )
        })?;
        t.check(flat0(&nabla(&fs)) == delta(&fs), || {
            cx(
                "flat0 of a codiscrete graph is not discrete",
                &[("nabla S", &nabla(&fs))],
            )
        })?;
    }
    for x in &fam.graphs {
        t.instances += 1;
        let (sx, fx) = (sharp0(x), flat0(x));
        let (unit, counit) = (sharp_unit(x), flat_counit(x));
        t.check(
            unit.is_morphism(x, &sx) && counit.is_morphism(&fx, x),
            || cx("unit or counit is not a morphism", &[("X", x)]),
        )?;
        t.check(sharp_unit(&sx).is_iso(&sharp0(&sx)), || {
            cx("sharp0 is not idempotent", &[("X", x)])
        })?;
        t.check(flat_counit(&fx).is_iso(&fx) && flat0(&fx) == fx, || {
            cx("flat0 is not idempotent", &[("X", x)])
        })?;
        t.check(flat0(&sx) == fx, || {
            cx("flat0 . sharp0 differs from flat0", &[("X", x)])
        })?;
        t.check(homs(&one, x).len() == gamma(x).len(), || {
            cx("points differ from vertices", &[("X", x)])
        })?;
        t.check(
            homs(x, &one).len() == 1 && homs(&empty(), x).len() == 1,
            || cx("terminal or initial object fails", &[("X", x)]),
        )?;
        for s in 0..=n {
            let fs = FinSet::numbered(s);
            let c = nabla(&fs);
            let pre = sorted(homs(&sx, &c).iter().map(|k| unit.then(k)).collect());
            t.check(pre == homs(x, &c), || {
                cx("precomposition with the unit is not a bijection onto maps into a codiscrete graph", &[("X", x), ("C", &c)])
            })?;
            let d = delta(&fs);
            let post = sorted(homs(&d, &fx).iter().map(|k| k.then(&counit)).collect());
            t.check(post == homs(&d, x), || {
                cx(
                    "postcomposition with the counit is not a bijection from a discrete graph",
                    &[("D", &d), ("X", x)],
                )
            })?;
        }
    }
    Ok(())
}

fn m_criterion(t: &mut Tally, fam: &Family) -> Step {
    for (i, x) in fam.graphs.iter().enumerate() {
        for (j, y) in fam.graphs.iter().enumerate() {
            t.instances += 1;
            for (k, f) in fam.hom(i, j).iter().enumerate() {
                t.check(
                    is_rel_codiscrete(x, y, f) == fam.is_m[i * fam.len() + j][k],
                    || {
                        cx(
                            "pullback and edge-level forms of relative codiscreteness disagree",
                            &[("X", x), ("Y", y)],
                        )
                    },
                )?;
            }
        }
    }
    Ok(())
}

fn factorization_existence(t: &mut Tally, fam: &Family) -> Step {
    for (i, x) in fam.graphs.iter().enumerate() {
        for (j, y) in fam.graphs.iter().enumerate() {
            for f in fam.hom(i, j) {
                t.instances += 1;
                let r = sharp_rel(x, y, f);
                let z = &r.cone.graph;
                let bad = |what: &str| {
                    cx(
                        format!("factorization: {what}"),
                        &[("X", x), ("Y", y), ("Z", z)],
                    )
                };
                t.check(r.unit.is_morphism(x, z) && r.proj.is_morphism(z, y), || {
                    bad("legs are not morphisms")
                })?;
                t.check(r.unit.is_vertex_bijective(z.vertex_count()), || {
                    bad("first leg is not in E")
                })?;
                t.check(is_rel_codiscrete(z, y, &r.proj), || {
                    bad("second leg is not in M")
                })?;
                t.check(&r.unit.then(&r.proj) == f, || {
                    bad("legs do not compose to the map")
                })?;
            }
        }
    }
    Ok(())
}

fn factorization_uniqueness(t: &mut Tally, fam: &Family) -> Step {
    let len = fam.len();
    let fact: Vec<Vec<RelSharp>> = (0..len * len)
        .map(|ij| {
            let (x, y) = (&fam.graphs[ij / len], &fam.graphs[ij % len]);
            fam.homs[ij].iter().map(|f| sharp_rel(x, y, f)).collect()
        })
        .collect();
    let mut alternatives: Vec<Vec<u32>> = fam.homs.iter().map(|h| vec![0; h.len()]).collect();
    // every E-then-M composite is compared with the canonical factorization
    // of the map it composes to
    for (k, w) in fam.graphs.iter().enumerate() {
        for (i, x) in fam.graphs.iter().enumerate() {
            for &ei in &fam.e_list[i * len + k] {
                let e2 = &fam.hom(i, k)[ei];
                for (j, y) in fam.graphs.iter().enumerate() {
                    for &mi in &fam.m_list[k * len + j] {
                        let m2 = &fam.hom(k, j)[mi];
                        t.instances += 1;
                        let f = e2.then(m2);
                        let fi = fam
                            .position(i, j, &f)
                            .expect("hom-sets are closed under composition");
                        alternatives[i * len + j][fi] += 1;
                        let r = &fact[i * len + j][fi];
                        let z = &r.cone.graph;
                        // a comparison map is forced on vertices by the E legs
                        let mut vmap = vec![0; z.vertex_count()];
                        for (a, &b) in r.unit.vmap.iter().enumerate() {
                            vmap[b] = e2.vmap[a];
                        }
                        let mut cands = Vec::new();
                        extend_vertex_map(z, w, &fam.adj[k], &vmap, &mut cands);
                        let fitting: Vec<&GraphMor> = cands
                            .iter()
                            .filter(|phi| &r.unit.then(phi) == e2 && phi.then(m2) == r.proj)
                            .collect();
                        t.check(fitting.len() == 1 && fitting[0].is_iso(w), || {
                            cx(
                                format!(
                                    "{} comparison maps between two factorizations",
                                    fitting.len()
                                ),
                                &[("X", x), ("Y", y), ("Z", z), ("Z'", w)],
                            )
                        })?;
                    }
                }
            }
        }
    }
    if fam.closed {
        for (ij, counts) in alternatives.iter().enumerate() {
            for &c in counts {
                t.check(c > 0, || {
                    cx(
                        "no relabelled copy of the factorization in the family",
                        &[("X", &fam.graphs[ij / len]), ("Y", &fam.graphs[ij % len])],
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn three_for_two(t: &mut Tally, fam: &Family) -> Step {
    let len = fam.len();
    let check = |t: &mut Tally, i: usize, j: usize, k: usize, f: &GraphMor, g: &GraphMor| {
        let (fe, ge) = (
            is_bijection(&f.vmap, fam.graphs[j].vertex_count()),
            is_bijection(&g.vmap, fam.graphs[k].vertex_count()),
        );
        let nk = fam.graphs[k].vertex_count();
        let mut hit = [false; 64];
        let gfe = f.vmap.len() == nk
            && f.vmap
                .iter()
                .all(|&v| !std::mem::replace(&mut hit[g.vmap[v]], true));
        let ok = !matches!(
            (fe, ge, gfe),
            (true, true, false) | (false, true, true) | (true, false, true)
        );
        t.check(ok, || {
            cx(
                format!("two of f (E: {fe}), g (E: {ge}), g.f (E: {gfe}) do not force the third"),
                &[
                    ("X", &fam.graphs[i]),
                    ("Y", &fam.graphs[j]),
                    ("W", &fam.graphs[k]),
                ],
            )
        })
    };
    // pairs where at least one of f, g is in E, which covers every
    // instance of the rule
    for i in 0..len {
        for j in 0..len {
            for k in 0..len {
                t.instances += 1;
                for &fi in &fam.e_list[i * len + j] {
                    for g in fam.hom(j, k) {
                        check(t, i, j, k, &fam.hom(i, j)[fi], g)?;
                    }
                }
                for &gi in &fam.e_list[j * len + k] {
                    for (fi, f) in fam.hom(i, j).iter().enumerate() {
                        if !fam.is_e[i * len + j][fi] {
                            check(t, i, j, k, f, &fam.hom(j, k)[gi])?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn m_composition(t: &mut Tally, fam: &Family) -> Step {
    let len = fam.len();
    for (i, x) in fam.graphs.iter().enumerate() {
        for j in 0..len {
            for (k, w) in fam.graphs.iter().enumerate() {
                t.instances += 1;
                for &fi in &fam.m_list[i * len + j] {
                    for &gi in &fam.m_list[j * len + k] {
                        let gf = fam.hom(i, j)[fi].then(&fam.hom(j, k)[gi]);
                        let ok = fam
                            .position(i, k, &gf)
                            .is_some_and(|p| fam.is_m[i * len + k][p]);
                        t.check(ok, || {
                            cx(
                                "composite of relatively codiscrete maps is not",
                                &[("X", x), ("Y", &fam.graphs[j]), ("W", w)],
                            )
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn pullback_stability(t: &mut Tally, fam: &Family) -> Step {
    let len = fam.len();
    for (i, x) in fam.graphs.iter().enumerate() {
        for (j, y) in fam.graphs.iter().enumerate() {
            for &ei in &fam.e_list[i * len + j] {
                let e = &fam.hom(i, j)[ei];
                for (k, w) in fam.graphs.iter().enumerate() {
                    for g in fam.hom(k, j) {
                        t.instances += 1;
                        // each vertex of W must meet exactly one vertex of X
                        // in the pullback
                        let ok = g
                            .vmap
                            .iter()
                            .all(|&ga| e.vmap.iter().filter(|&&eb| eb == ga).count() == 1);
                        t.check(ok, || {
                            cx(
                                "pullback of an E-map is not in E",
                                &[("X", x), ("Y", y), ("W", w)],
                            )
                        })?;
                        if k == i {
                            let cone = pullback(w, x, g, e);
                            let ok = cone.pr1.is_morphism(&cone.graph, w)
                                && cone.pr2.is_morphism(&cone.graph, x)
                                && cone.pr1.then(g) == cone.pr2.then(e)
                                && cone.pr1.is_vertex_bijective(w.vertex_count())
                                && cone.graph.validate().is_ok();
                            t.check(ok, || {
                                cx(
                                    "pullback cone of an E-map is malformed",
                                    &[("X", x), ("Y", y), ("W", w)],
                                )
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// One-vertex graphs with up to `k` extra loops.
fn loop_graphs(k: usize) -> Vec<ReflGraph> {
    (0..=k)
        .map(|extra| {
            let mut g = terminal();
            for _ in 0..extra {
                g.add_edge(0, 0);
            }
            g
        })
        .collect()
}

fn point(b: &ReflGraph, v: usize) -> GraphMor {
    GraphMor {
        vmap: vec![v],
        emap: vec![b.refl[v]],
    }
}

fn lex_shadow(t: &mut Tally, fam: &Family, points: &[ReflGraph]) -> Step {
    let one = terminal();
    // fibers of maps between sharp-contractible graphs are sharp-contractible
    for a in points {
        for b in points {
            for f in homs(a, b) {
                for v in 0..b.vertex_count() {
                    t.instances += 1;
                    let fib = pullback(a, &one, &f, &point(b, v));
                    t.check(gamma(&fib.graph).len() == 1, || {
                        cx(
                            "fiber over a point is not sharp-contractible",
                            &[("A", a), ("B", b)],
                        )
                    })?;
                }
            }
        }
    }
    // sharp0 commutes with fibers
    for (i, x) in fam.graphs.iter().enumerate() {
        for (j, y) in fam.graphs.iter().enumerate() {
            for f in fam.hom(i, j) {
                for v in 0..y.vertex_count() {
                    t.instances += 1;
                    let fib = pullback(x, &one, f, &point(y, v));
                    let sfib =
                        pullback(&sharp0(x), &one, &sharp_map(x, y, f), &point(&sharp0(y), v));
                    let lhs = sharp0(&fib.graph);
                    t.check(
                        lhs.vertex_count() == sfib.graph.vertex_count()
                            && lhs.edge_count() == sfib.graph.edge_count(),
                        || {
                            cx(
                                "sharp0 of a fiber differs from the fiber of sharp0",
                                &[("X", x), ("Y", y)],
                            )
                        },
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn random_family(params: &VerifyParams) -> Vec<ReflGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..RANDOM_GRAPHS)
        .map(|_| {
            let n = rng.random_range(1..=params.max_vertices.max(1));
            let mut g = simple_graphs(n).swap_remove(0);
            for a in 0..n {
                for b in 0..n {
                    if a != b && rng.random_bool(0.5) {
                        g.add_edge(a, b);
                    }
                }
            }
            for _ in 0..rng.random_range(1..=params.max_extra_edges) {
                let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
                g.add_edge(a, b);
            }
            g
        })
        .collect()
}

/// Runs every semantic check over the exhaustive family of simple graphs on
/// `max_vertices` vertices, then over a seeded random family of graphs with
/// parallel edges when `max_extra_edges > 0`. The first failing section stops
/// the run and carries its counterexample.
pub fn verify_cohesion(params: &VerifyParams) -> Result<AdjunctionReport, ModelError> {
    if params.max_vertices > MAX_VERTICES {
        return Err(ModelError::TooLarge(format!(
            "--max-vertices {} (at most {MAX_VERTICES})",
            params.max_vertices
        )));
    }
    if params.max_extra_edges > MAX_EXTRA_EDGES {
        return Err(ModelError::TooLarge(format!(
            "--max-extra-edges {} (at most {MAX_EXTRA_EDGES})",
            params.max_extra_edges
        )));
    }
    let n = params.max_vertices;
    let fault = params.fault;
    let fam = Family::new(simple_graphs(n), true)?;
    let random = if params.max_extra_edges > 0 {
        Some(Family::new(random_family(params), false)?)
    } else {
        None
    };
    let mut v = Verifier {
        sections: Vec::new(),
        aborted: false,
    };
    v.run("fully-faithful-delta", |t| fully_faithful(t, n, delta));
    v.run("fully-faithful-nabla", |t| {
        fully_faithful(t, n, |s| nabla_with(fault, s))
    });
    let families: Vec<(&str, &Family)> = std::iter::once(("", &fam))
        .chain(random.as_ref().map(|r| ("random/", r)))
        .collect();
    for &(prefix, f) in &families {
        let name = |s: &str| format!("{prefix}{s}");
        v.run(&name("adjunction-pi0-delta"), |t| {
            adjunction_pi_delta(t, f, n)
        });
        v.run(&name("adjunction-delta-gamma"), |t| {
            adjunction_delta_gamma(t, f, n)
        });
        v.run(&name("adjunction-gamma-nabla"), |t| {
            adjunction_gamma_nabla(t, f, n, fault)
        });
        v.run(&name("pi0-product"), |t| pi0_product(t, f));
        v.run(&name("reflectors"), |t| reflectors(t, f, n, fault));
        v.run(&name("m-criterion"), |t| m_criterion(t, f));
        v.run(&name("factorization-existence"), |t| {
            factorization_existence(t, f)
        });
        v.run(&name("factorization-uniqueness"), |t| {
            factorization_uniqueness(t, f)
        });
        v.run(&name("e-three-for-two"), |t| three_for_two(t, f));
        v.run(&name("m-composition"), |t| m_composition(t, f));
        v.run(&name("e-pullback-stable"), |t| pullback_stability(t, f));
        let points: Vec<ReflGraph> = if prefix.is_empty() {
            loop_graphs(2)
        } else {
            f.graphs
                .iter()
                .filter(|g| g.vertex_count() == 1)
                .cloned()
                .collect()
        };
        v.run(&name("lex-shadow"), |t| lex_shadow(t, f, &points));
    }
    let passed = !v.aborted;
    Ok(AdjunctionReport {
        schema: MODEL_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        params: params.clone(),
        family: FamilyStats {
            graphs: fam.len(),
            morphisms: fam.morphisms(),
            max_set_size: n,
            random_graphs: random.as_ref().map_or(0, Family::len),
            random_morphisms: random.as_ref().map_or(0, Family::morphisms),
        },
        sections: v.sections,
        passed,
    })
}
