use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::ModelError;

/// A finite set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    /// Labels are sorted, so equal sets compare equal.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<FinSet, ModelError> {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateLabel(w[0].clone()));
        }
        Ok(FinSet { labels })
    }

    /// `{s0, .., s(n-1)}`.
    pub fn numbered(n: usize) -> FinSet {
        FinSet::new((0..n).map(|i| format!("s{i}"))).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite reflexive graph: vertices, directed edges, and a chosen loop at
/// every vertex. Vertices and edges are addressed by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReflGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub refl: Vec<usize>,
}

/// A morphism given by its vertex and edge maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphMor {
    pub vmap: Vec<usize>,
    pub emap: Vec<usize>,
}

impl ReflGraph {
    /// Vertices with their loops and nothing else.
    fn discrete(labels: &[String]) -> ReflGraph {
        ReflGraph {
            vertices: labels.to_vec(),
            edges: labels
                .iter()
                .enumerate()
                .map(|(i, l)| Edge {
                    id: format!("r{l}"),
                    src: i,
                    tgt: i,
                })
                .collect(),
            refl: (0..labels.len()).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adds a non-reflexivity edge.
    pub fn add_edge(&mut self, src: usize, tgt: usize) -> usize {
        let id = format!(
            "{}>{}#{}",
            self.vertices[src],
            self.vertices[tgt],
            self.edges.len()
        );
        self.edges.push(Edge { id, src, tgt });
        self.edges.len() - 1
    }

    pub fn is_refl(&self, e: usize) -> bool {
        self.refl[self.edges[e].src] == e
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        FinSet::new(self.vertices.iter().cloned())?;
        let n = self.vertex_count();
        let mut ids: Vec<&str> = self.edges.iter().map(|e| e.id.as_str()).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateLabel(w[0].to_owned()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.src >= n || e.tgt >= n) {
            return Err(ModelError::Invalid(format!(
                "edge {} has an endpoint out of range",
                e.id
            )));
        }
        if self.refl.len() != n {
            return Err(ModelError::Invalid(format!(
                "{} vertices but {} reflexivity edges",
                n,
                self.refl.len()
            )));
        }
        for (v, &e) in self.refl.iter().enumerate() {
            match self.edges.get(e) {
                Some(edge) if edge.src == v && edge.tgt == v => {}
                Some(edge) => {
                    return Err(ModelError::Invalid(format!(
                        "refl({}) = {} is not a loop at {}",
                        self.vertices[v], edge.id, self.vertices[v]
                    )))
                }
                None => {
                    return Err(ModelError::Invalid(format!(
                        "refl({}) is not a listed edge",
                        self.vertices[v]
                    )))
                }
            }
        }
        Ok(())
    }

    /// Edge indices from `u` to `v`, for all pairs, indexed `u * n + v`.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n * n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src * n + e.tgt].push(i);
        }
        adj
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    src: self.vertices[e.src].clone(),
                    tgt: self.vertices[e.tgt].clone(),
                })
                .collect(),
            refl: self
                .refl
                .iter()
                .enumerate()
                .map(|(v, &e)| {
                    (
                        self.vertices[v].clone(),
                        self.edges.get(e).map_or_else(String::new, |e| e.id.clone()),
                    )
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<ReflGraph, ModelError> {
        let vindex: HashMap<&str, usize> = j
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let vertex = |l: &str| {
            vindex
                .get(l)
                .copied()
                .ok_or_else(|| ModelError::Invalid(format!("unknown vertex {l}")))
        };
        let edges = j
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    src: vertex(&e.src)?,
                    tgt: vertex(&e.tgt)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let eindex: HashMap<&str, usize> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), i))
            .collect();
        let refl = j
            .vertices
            .iter()
            .map(|v| {
                let id = j.refl.get(v).ok_or_else(|| {
                    ModelError::Invalid(format!("vertex {v} has no reflexivity edge"))
                })?;
                eindex
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| ModelError::Invalid(format!("unknown edge {id}")))
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let g = ReflGraph {
            vertices: j.vertices.clone(),
            edges,
            refl,
        };
        g.validate()?;
        Ok(g)
    }
}

/// Serialized form: `{vertices, edges: [{id, src, tgt}], refl: {vertex: edge-id}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub refl: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

impl Serialize for ReflGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ReflGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        ReflGraph::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl GraphMor {
    pub fn identity(x: &ReflGraph) -> GraphMor {
        GraphMor {
            vmap: (0..x.vertex_count()).collect(),
            emap: (0..x.edge_count()).collect(),
        }
    }

    /// `g . self`.
    pub fn then(&self, g: &GraphMor) -> GraphMor {
        GraphMor {
            vmap: self.vmap.iter().map(|&v| g.vmap[v]).collect(),
            emap: self.emap.iter().map(|&e| g.emap[e]).collect(),
        }
    }

    /// Commutes with source, target and reflexivity.
    pub fn is_morphism(&self, x: &ReflGraph, y: &ReflGraph) -> bool {
        self.vmap.len() == x.vertex_count()
            && self.emap.len() == x.edge_count()
            && self.vmap.iter().all(|&v| v < y.vertex_count())
            && self.emap.iter().all(|&e| e < y.edge_count())
            && x.edges.iter().zip(&self.emap).all(|(e, &fe)| {
                y.edges[fe].src == self.vmap[e.src] && y.edges[fe].tgt == self.vmap[e.tgt]
            })
            && x.refl
                .iter()
                .enumerate()
                .all(|(v, &r)| self.emap[r] == y.refl[self.vmap[v]])
    }

    pub fn is_vertex_bijective(&self, codomain_vertices: usize) -> bool {
        is_bijection(&self.vmap, codomain_vertices)
    }

    pub fn is_iso(&self, y: &ReflGraph) -> bool {
        is_bijection(&self.vmap, y.vertex_count()) && is_bijection(&self.emap, y.edge_count())
    }
}

pub fn is_bijection(map: &[usize], codomain: usize) -> bool {
    if map.len() != codomain {
        return false;
    }
    let mut hit = vec![false; codomain];
    for &i in map {
        if i >= codomain || hit[i] {
            return false;
        }
        hit[i] = true;
    }
    true
}

/// All functions `[0, m) -> [0, n)`, in lexicographic order.
pub fn all_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > 0 && n == 0 {
        return out;
    }
    let mut f = vec![0; m];
    loop {
        out.push(f.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
        }
    }
}

pub fn terminal() -> ReflGraph {
    ReflGraph::discrete(&["*".to_owned()])
}

pub fn empty() -> ReflGraph {
    ReflGraph::discrete(&[])
}

/// The vertex set.
pub fn gamma(x: &ReflGraph) -> FinSet {
    FinSet::new(x.vertices.iter().cloned()).expect("valid graph has distinct vertices")
}

/// Discrete graph: only the reflexivity loops.
pub fn delta(s: &FinSet) -> ReflGraph {
    ReflGraph::discrete(s.labels())
}

/// Codiscrete graph: one edge per ordered pair, the diagonal ones reflexive.
pub fn nabla(s: &FinSet) -> ReflGraph {
    nabla_ordered(s.labels())
}

/// Connected components, with the quotient map from vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub set: FinSet,
    /// Component index of each vertex, numbered by first vertex.
    pub quotient: Vec<usize>,
    pub count: usize,
}

pub fn pi0(x: &ReflGraph) -> Components {
    let n = x.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for e in &x.edges {
        let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.tgt));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut quotient = vec![0; n];
    let mut members: Vec<Vec<&str>> = Vec::new();
    for (v, q) in quotient.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = members.len();
            members.push(Vec::new());
        }
        *q = index[r];
        members[index[r]].push(&x.vertices[v]);
    }
    Components {
        count: members.len(),
        set: FinSet::new(members.iter().map(|m| format!("{{{}}}", m.join(","))))
            .expect("components are disjoint"),
        quotient,
    }
}

/// Action of `pi0` on a morphism, on component indices.
pub fn pi0_map(x: &ReflGraph, y: &ReflGraph, f: &GraphMor) -> Vec<usize> {
    let (cx, cy) = (pi0(x), pi0(y));
    let mut out = vec![0; cx.count];
    for v in 0..x.vertex_count() {
        out[cx.quotient[v]] = cy.quotient[f.vmap[v]];
    }
    out
}

/// Every morphism `x -> y`, in lexicographic order of vertex map then edge map.
pub fn hom_graphs(x: &ReflGraph, y: &ReflGraph, limit: u64) -> Result<Vec<GraphMor>, ModelError> {
    let (m, n) = (x.vertex_count(), y.vertex_count());
    let size = (n as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    if size > limit {
        return Err(ModelError::SizeLimit { maps: size, limit });
    }
    let adj = y.adjacency();
    let mut out = Vec::new();
    for vmap in all_maps(m, n) {
        extend_vertex_map(x, y, &adj, &vmap, &mut out);
    }
    Ok(out)
}

/// Every morphism `x -> y` with the given vertex map; `adj` is `y.adjacency()`.
pub fn extend_vertex_map(
    x: &ReflGraph,
    y: &ReflGraph,
    adj: &[Vec<usize>],
    vmap: &[usize],
    out: &mut Vec<GraphMor>,
) {
    let n = y.vertex_count();
    let free: Vec<usize> = (0..x.edge_count()).filter(|&e| !x.is_refl(e)).collect();
    let choices: Vec<&Vec<usize>> = free
        .iter()
        .map(|&e| &adj[vmap[x.edges[e].src] * n + vmap[x.edges[e].tgt]])
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut emap = vec![0; x.edge_count()];
    for (v, &r) in x.refl.iter().enumerate() {
        emap[r] = y.refl[vmap[v]];
    }
    let mut pick = vec![0; free.len()];
    'next: loop {
        for (k, &e) in free.iter().enumerate() {
            emap[e] = choices[k][pick[k]];
        }
        out.push(GraphMor {
            vmap: vmap.to_vec(),
            emap: emap.clone(),
        });
        let mut k = free.len();
        while k > 0 {
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                continue 'next;
            }
            pick[k] = 0;
        }
        return;
    }
}

/// A limit cone: the apex and its two legs.
#[derive(Debug, Clone)]
pub struct Cone {
    pub graph: ReflGraph,
    pub pr1: GraphMor,
    pub pr2: GraphMor,
    /// Apex vertex and edge indices by their pair of components, stored
    /// densely as `a * width + b`; `usize::MAX` marks absent pairs.
    vindex: Vec<usize>,
    eindex: Vec<usize>,
    vwidth: usize,
    ewidth: usize,
}

impl Cone {
    /// The mediating morphism of a cone `(q1, q2)` with apex `w`, if the
    /// pairs it names exist in the apex.
    pub fn gap(&self, w: &ReflGraph, q1: &GraphMor, q2: &GraphMor) -> Option<GraphMor> {
        let vmap = (0..w.vertex_count())
            .map(|v| present(self.vindex[q1.vmap[v] * self.vwidth + q2.vmap[v]]))
            .collect::<Option<Vec<_>>>()?;
        let emap = (0..w.edge_count())
            .map(|e| present(self.eindex[q1.emap[e] * self.ewidth + q2.emap[e]]))
            .collect::<Option<Vec<_>>>()?;
        Some(GraphMor { vmap, emap })
    }
}

fn present(i: usize) -> Option<usize> {
    (i != usize::MAX).then_some(i)
}

/// The pullback of `f : x -> z` and `g : y -> z`.
pub fn pullback(x: &ReflGraph, y: &ReflGraph, f: &GraphMor, g: &GraphMor) -> Cone {
    let mut graph = ReflGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
        refl: Vec::new(),
    };
    let (mut p1, mut p2) = (GraphMor::default(), GraphMor::default());
    let (vwidth, ewidth) = (y.vertex_count(), y.edge_count());
    let mut vindex = vec![usize::MAX; x.vertex_count() * vwidth];
    for a in 0..x.vertex_count() {
        for b in 0..y.vertex_count() {
            if f.vmap[a] == g.vmap[b] {
                vindex[a * vwidth + b] = graph.vertices.len();
                graph
                    .vertices
                    .push(format!("({},{})", x.vertices[a], y.vertices[b]));
                p1.vmap.push(a);
                p2.vmap.push(b);
            }
        }
    }
    let mut eindex = vec![usize::MAX; x.edge_count() * ewidth];
    for (i, e1) in x.edges.iter().enumerate() {
        for (j, e2) in y.edges.iter().enumerate() {
            if f.emap[i] == g.emap[j] {
                eindex[i * ewidth + j] = graph.edges.len();
                graph.edges.push(Edge {
                    id: format!("({},{})", e1.id, e2.id),
                    src: vindex[e1.src * vwidth + e2.src],
                    tgt: vindex[e1.tgt * vwidth + e2.tgt],
                });
                p1.emap.push(i);
                p2.emap.push(j);
            }
        }
    }
    graph.refl = p1
        .vmap
        .iter()
        .zip(&p2.vmap)
        .map(|(&a, &b)| eindex[x.refl[a] * ewidth + y.refl[b]])
        .collect();
    Cone {
        graph,
        pr1: p1,
        pr2: p2,
        vindex,
        eindex,
        vwidth,
        ewidth,
    }
}

/// The unique morphism into the terminal graph.
pub fn to_terminal(x: &ReflGraph) -> GraphMor {
    GraphMor {
        vmap: vec![0; x.vertex_count()],
        emap: vec![0; x.edge_count()],
    }
}

pub fn product(x: &ReflGraph, y: &ReflGraph) -> Cone {
    pullback(x, y, &to_terminal(x), &to_terminal(y))
}

/// `nabla . gamma`, on the vertices of `x` in their order.
pub fn sharp0(x: &ReflGraph) -> ReflGraph {
    nabla_ordered(&x.vertices)
}

/// `delta . gamma`.
pub fn flat0(x: &ReflGraph) -> ReflGraph {
    ReflGraph::discrete(&x.vertices)
}

fn nabla_ordered(labels: &[String]) -> ReflGraph {
    let n = labels.len();
    let mut edges = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            edges.push(Edge {
                id: format!("{}>{}", labels[a], labels[b]),
                src: a,
                tgt: b,
            });
        }
    }
    ReflGraph {
        vertices: labels.to_vec(),
        edges,
        refl: (0..n).map(|a| a * n + a).collect(),
    }
}

/// The unit `x -> sharp0 x`, the identity on vertices.
pub fn sharp_unit(x: &ReflGraph) -> GraphMor {
    let n = x.vertex_count();
    GraphMor {
        vmap: (0..n).collect(),
        emap: x.edges.iter().map(|e| e.src * n + e.tgt).collect(),
    }
}

/// The counit `flat0 x -> x`, the identity on vertices.
pub fn flat_counit(x: &ReflGraph) -> GraphMor {
    GraphMor {
        vmap: (0..x.vertex_count()).collect(),
        emap: x.refl.clone(),
    }
}

/// `sharp0 f : sharp0 a -> sharp0 x`.
pub fn sharp_map(a: &ReflGraph, x: &ReflGraph, p: &GraphMor) -> GraphMor {
    let (na, nx) = (a.vertex_count(), x.vertex_count());
    let mut emap = Vec::with_capacity(na * na);
    for u in 0..na {
        for v in 0..na {
            emap.push(p.vmap[u] * nx + p.vmap[v]);
        }
    }
    GraphMor {
        vmap: p.vmap.clone(),
        emap,
    }
}

/// The relative codiscrete reflection of `p : a -> x`: the pullback of
/// `sharp0 p` along the unit of `x`, with the induced unit from `a`.
#[derive(Debug, Clone)]
pub struct RelSharp {
    pub cone: Cone,
    /// `a -> cone.graph`.
    pub unit: GraphMor,
    /// `cone.graph -> x`.
    pub proj: GraphMor,
}

pub fn sharp_rel(a: &ReflGraph, x: &ReflGraph, p: &GraphMor) -> RelSharp {
    let cone = pullback(x, &sharp0(a), &sharp_unit(x), &sharp_map(a, x, p));
    let unit = cone
        .gap(a, p, &sharp_unit(a))
        .expect("the unit square commutes");
    RelSharp {
        proj: cone.pr1.clone(),
        unit,
        cone,
    }
}

/// True iff the unit square of `p : a -> x` is a pullback, tested by building
/// the pullback and checking that the comparison map is an isomorphism.
pub fn is_rel_codiscrete(a: &ReflGraph, x: &ReflGraph, p: &GraphMor) -> bool {
    let r = sharp_rel(a, x, p);
    r.unit.is_iso(&r.cone.graph)
}

/// Edge-level form of relative codiscreteness: for all vertices `u, v`, `p`
/// maps the edges `u -> v` bijectively onto the edges `p u -> p v`.
pub fn locally_bijective(a: &ReflGraph, x: &ReflGraph, p: &GraphMor) -> bool {
    let (na, nx) = (a.vertex_count(), x.vertex_count());
    let (aa, ax) = (a.adjacency(), x.adjacency());
    (0..na).all(|u| {
        (0..na).all(|v| {
            let target = &ax[p.vmap[u] * nx + p.vmap[v]];
            let mut image: Vec<usize> = aa[u * na + v].iter().map(|&e| p.emap[e]).collect();
            image.sort_unstable();
            let mut t = target.clone();
            t.sort_unstable();
            image == t
        })
    })
}
