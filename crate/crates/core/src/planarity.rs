//! Planarity testing with certificates.
//!
//! A graph is planar iff each of its biconnected blocks is. Every block is
//! embedded with the Demoucron-Malgrange-Pertuiset face-splitting algorithm;
//! the list of face cycles is the planarity certificate and can be checked
//! independently ([`verify_embedding`]). On failure a minimal non-planar
//! subgraph is extracted by edge deletion and checked to be a subdivision of
//! K5 or K3,3 ([`verify_kuratowski`]).

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

/// Simple undirected graph; loops and parallel edges are dropped on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut list: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        list.sort_unstable();
        list.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &list {
            assert!(b < n, "edge endpoint {b} out of range for {n} vertices");
            adj[a].push(b);
            adj[b].push(a);
        }
        Graph { n, edges: list, adj }
    }

    pub fn complete(k: usize) -> Self {
        Graph::new(k, (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::new(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))))
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn connected_components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }
}

/// Face cycles of every biconnected block with at least three vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub blocks: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A subdivision of K5 or K3,3 inside the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kuratowski {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Planarity {
    Planar(Embedding),
    NonPlanar(Kuratowski),
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }
}

pub fn is_planar(g: &Graph) -> bool {
    blocks(g).iter().all(|b| embed_block(b).is_some())
}

/// Decide planarity and return the certificate.
pub fn planarity(g: &Graph) -> Planarity {
    let mut faces = Vec::new();
    for b in blocks(g) {
        match embed_block(&b) {
            Some(f) => {
                if !f.is_empty() {
                    faces.push(f);
                }
            }
            None => return Planarity::NonPlanar(kuratowski(b)),
        }
    }
    Planarity::Planar(Embedding { blocks: faces })
}

/// Edge sets of the biconnected blocks (iterative Hopcroft-Tarjan).
fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n;
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frame: (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
            if *i < g.adj[v].len() {
                let w = g.adj[v][*i];
                *i += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Local relabelling of an edge list.
struct Local {
    ids: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Local {
    fn new(edges: &[(usize, usize)]) -> Self {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut ids = Vec::new();
        let mut id = |v: usize, ids: &mut Vec<usize>| {
            *index.entry(v).or_insert_with(|| {
                ids.push(v);
                ids.len() - 1
            })
        };
        let local: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (id(a, &mut ids), id(b, &mut ids)))
            .collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in &local {
            adj[a].push(b);
            adj[b].push(a);
        }
        Local { ids, adj }
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// A cycle through a biconnected graph, found from the first back edge of a DFS.
fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if *i < adj[v].len() {
            let w = adj[v][*i];
            *i += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                return cycle;
            }
        } else {
            stack.pop();
        }
    }
    unreachable!("biconnected block without a cycle")
}

struct Fragment {
    attachments: Vec<usize>,
    /// A path between two distinct attachments, endpoints included.
    path: Vec<usize>,
}

/// Faces of a block, or None if it is not planar. Blocks that are a single
/// edge have no faces.
fn embed_block(edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if edges.len() <= 1 {
        return Some(Vec::new());
    }
    let local = Local::new(edges);
    let n = local.ids.len();
    let adj = &local.adj;
    if edges.len() > 3 * n - 6 {
        return None;
    }
    let cycle = find_cycle(adj);
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        h_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    let words = n.div_ceil(64);
    let bits = |f: &[usize]| {
        let mut b = vec![0u64; words];
        for &v in f {
            b[v / 64] |= 1 << (v % 64);
        }
        b
    };
    let mut face_bits: Vec<Vec<u64>> = faces.iter().map(|f| bits(f)).collect();

    while h_edges.len() < edges.len() {
        let frags = fragments(adj, &in_h, &h_edges);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| {
                    frag.attachments
                        .iter()
                        .all(|&v| face_bits[f][v / 64] >> (v % 64) & 1 == 1)
                })
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, f) = choice.expect("a fragment exists while edges remain");
        let path = &frags[fi].path;
        let (a, b) = (path[0], *path.last().expect("path"));
        let face = &faces[f];
        let ia = face.iter().position(|&v| v == a).expect("attachment on face");
        let ib = face.iter().position(|&v| v == b).expect("attachment on face");
        let inner: Vec<usize> = path[1..path.len() - 1].to_vec();
        let rotate = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % face.len();
            }
            out
        };
        // a ..face.. b, then back to a along the path
        let mut f1 = rotate(ia, ib);
        f1.extend(inner.iter().rev());
        // b ..face.. a, then forward to b along the path
        let mut f2 = rotate(ib, ia);
        f2.extend(inner.iter());
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        for &v in path {
            in_h[v] = true;
        }
        face_bits[f] = bits(&f1);
        faces[f] = f1;
        face_bits.push(bits(&f2));
        faces.push(f2);
    }
    Some(
        faces
            .into_iter()
            .map(|f| f.into_iter().map(|v| local.ids[v]).collect())
            .collect(),
    )
}

/// Bridges of G relative to the embedded subgraph H.
fn fragments(adj: &[Vec<usize>], in_h: &[bool], h_edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        if !in_h[a] {
            continue;
        }
        for &b in &adj[a] {
            if a < b && in_h[b] && !h_edges.contains(&(a, b)) {
                out.push(Fragment {
                    attachments: vec![a, b],
                    path: vec![a, b],
                });
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if in_h[s] || comp[s] != usize::MAX {
            continue;
        }
        let c = out.len();
        comp[s] = c;
        let mut members = vec![s];
        let mut stack = vec![s];
        let mut attach: Vec<usize> = Vec::new();
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if in_h[w] {
                    attach.push(w);
                } else if comp[w] == usize::MAX {
                    comp[w] = c;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        attach.sort_unstable();
        attach.dedup();
        // path from the first attachment through the component to another one
        let start = attach[0];
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for &w in &adj[start] {
            if !in_h[w] && comp[w] == c && !prev.contains_key(&w) {
                prev.insert(w, start);
                queue.push_back(w);
            }
        }
        let mut end = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if in_h[w] {
                    if w != start {
                        end = Some((v, w));
                        break 'bfs;
                    }
                } else if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(w) {
                    e.insert(v);
                    queue.push_back(w);
                }
            }
        }
        let (last, target) = end.expect("fragment of a biconnected graph has two attachments");
        let mut path = vec![target, last];
        let mut x = last;
        while let Some(&p) = prev.get(&x) {
            path.push(p);
            if p == start {
                break;
            }
            x = p;
        }
        path.reverse();
        out.push(Fragment {
            attachments: attach,
            path,
        });
    }
    out
}

/// Shrink a non-planar edge set to a minimal non-planar one by deleting
/// chunks of edges, then read off the branch vertices.
fn kuratowski(edges: Vec<(usize, usize)>) -> Kuratowski {
    let nonplanar = |es: &[(usize, usize)]| {
        let n = es.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        !is_planar(&Graph::new(n, es.iter().copied()))
    };
    let mut keep = edges;
    let mut chunk = (keep.len() / 2).max(1);
    loop {
        let mut i = 0;
        let mut removed_any = false;
        while i < keep.len() {
            let end = (i + chunk).min(keep.len());
            let trial: Vec<(usize, usize)> =
                keep[..i].iter().chain(&keep[end..]).copied().collect();
            if nonplanar(&trial) {
                keep = trial;
                removed_any = true;
            } else {
                i = end;
            }
        }
        if chunk == 1 && !removed_any {
            break;
        }
        if chunk > 1 {
            chunk /= 2;
        }
    }
    keep.sort_unstable();
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in &keep {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    let mut branch: Vec<usize> = degree
        .iter()
        .filter(|&(_, &d)| d > 2)
        .map(|(&v, _)| v)
        .collect();
    branch.sort_unstable();
    let kind = if branch.len() == 5 {
        KuratowskiKind::K5
    } else {
        KuratowskiKind::K33
    };
    Kuratowski {
        kind,
        branch_vertices: branch,
        edges: keep,
    }
}

/// Check that the face cycles describe a sphere embedding of every block of `g`.
pub fn verify_embedding(g: &Graph, emb: &Embedding) -> Result<(), String> {
    let edge_set: HashSet<(usize, usize)> = g.edges.iter().copied().collect();
    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    for (bi, faces) in emb.blocks.iter().enumerate() {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        // at each vertex, the pairs of consecutive edges around faces
        let mut corners: HashMap<usize, Vec<((usize, usize), (usize, usize))>> = HashMap::new();
        let mut vertices: HashSet<usize> = HashSet::new();
        for f in faces {
            if f.len() < 3 {
                return Err(format!("block {bi}: face {f:?} has fewer than three vertices"));
            }
            for i in 0..f.len() {
                let (a, b, c) = (f[i], f[(i + 1) % f.len()], f[(i + 2) % f.len()]);
                let e = key(a, b);
                if !edge_set.contains(&e) {
                    return Err(format!("block {bi}: {a}-{b} is not an edge"));
                }
                *count.entry(e).or_default() += 1;
                corners.entry(b).or_default().push((e, key(b, c)));
                vertices.insert(a);
            }
        }
        if let Some((e, c)) = count.iter().find(|&(_, &c)| c != 2) {
            return Err(format!("block {bi}: edge {e:?} lies on {c} face sides"));
        }
        for (v, pairs) in &corners {
            // the corners at v must chain all incident edges into one cycle
            let mut link: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
            for &(x, y) in pairs {
                link.entry(x).or_default().push(y);
                link.entry(y).or_default().push(x);
            }
            if link.values().any(|l| l.len() != 2) {
                return Err(format!("block {bi}: vertex {v} has a singular link"));
            }
            let start = *link.keys().next().expect("nonempty");
            let mut seen = HashSet::from([start]);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &link[&x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if seen.len() != link.len() {
                return Err(format!("block {bi}: vertex {v} is pinched"));
            }
        }
        let chi = vertices.len() as i64 - count.len() as i64 + faces.len() as i64;
        if chi != 2 {
            return Err(format!("block {bi}: Euler characteristic {chi}, expected 2"));
        }
        for e in count.keys() {
            if !covered.insert(*e) {
                return Err(format!("edge {e:?} appears in two blocks"));
            }
        }
    }
    // edges outside every listed block must be bridges
    for &e in &g.edges {
        if !covered.contains(&e) {
            let rest = Graph::new(g.n, g.edges.iter().copied().filter(|&x| x != e));
            if rest.connected_components() == g.connected_components() {
                return Err(format!("edge {e:?} is not embedded and is not a bridge"));
            }
        }
    }
    Ok(())
}

/// Check that the witness is a subgraph of `g` homeomorphic to K5 or K3,3.
pub fn verify_kuratowski(g: &Graph, w: &Kuratowski) -> Result<(), String> {
    let edge_set: HashSet<(usize, usize)> = g.edges.iter().copied().collect();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &w.edges {
        if !edge_set.contains(&key(a, b)) {
            return Err(format!("{a}-{b} is not an edge of the graph"));
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let branch: Vec<usize> = {
        let mut b: Vec<usize> = adj.iter().filter(|(_, l)| l.len() != 2).map(|(&v, _)| v).collect();
        b.sort_unstable();
        b
    };
    if branch != w.branch_vertices {
        return Err("branch vertices do not match the witness".into());
    }
    // smooth the degree-2 vertices: follow each path between branch vertices
    let mut reduced: Vec<(usize, usize)> = Vec::new();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for &s in &branch {
        for &first in &adj[&s] {
            if used.contains(&key(s, first)) {
                continue;
            }
            let (mut prev, mut cur) = (s, first);
            used.insert(key(prev, cur));
            while adj[&cur].len() == 2 {
                let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
                prev = cur;
                cur = next;
                used.insert(key(prev, cur));
            }
            reduced.push(key(s, cur));
        }
    }
    if used.len() != w.edges.len() {
        return Err("witness contains a cycle avoiding the branch vertices".into());
    }
    let mut red = reduced.clone();
    red.sort_unstable();
    red.dedup();
    if red.len() != reduced.len() || red.iter().any(|&(a, b)| a == b) {
        return Err("smoothed witness has loops or parallel edges".into());
    }
    let pos = |v: usize| branch.binary_search(&v).expect("branch vertex");
    let smoothed = Graph::new(branch.len(), red.iter().map(|&(a, b)| (pos(a), pos(b))));
    match w.kind {
        KuratowskiKind::K5 => {
            if branch.len() == 5 && smoothed.num_edges() == 10 {
                Ok(())
            } else {
                Err("smoothed witness is not K5".into())
            }
        }
        KuratowskiKind::K33 => {
            if branch.len() != 6 || smoothed.num_edges() != 9 {
                return Err("smoothed witness is not K3,3".into());
            }
            // 2-colour and check both sides have three vertices
            let mut colour = [usize::MAX; 6];
            colour[0] = 0;
            let mut stack = vec![0];
            while let Some(v) = stack.pop() {
                for &u in smoothed.neighbors(v) {
                    if colour[u] == usize::MAX {
                        colour[u] = 1 - colour[v];
                        stack.push(u);
                    } else if colour[u] == colour[v] {
                        return Err("smoothed witness is not bipartite".into());
                    }
                }
            }
            if colour.iter().filter(|&&c| c == 0).count() == 3 {
                Ok(())
            } else {
                Err("smoothed witness is not K3,3".into())
            }
        }
    }
}
