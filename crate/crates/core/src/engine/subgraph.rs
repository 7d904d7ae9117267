use crate::codec::{put_len, put_u32, Codec, CodecError, Reader};
use crate::graph::{EdgeRef, VertexId};

/// A connected subgraph of the data graph plus computation-specific state.
///
/// Vertices keep their insertion order; edges are kept as a sorted set.
#[derive(Clone, Debug)]
pub struct Subgraph<S> {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeRef>,
    pub state: S,
}

impl<S> Subgraph<S> {
    pub fn from_vertex(v: VertexId, state: S) -> Self {
        Subgraph {
            vertices: vec![v],
            edges: Vec::new(),
            state,
        }
    }

    /// A one-edge subgraph whose vertex order is `[from, to]`.
    pub fn from_edge(from: VertexId, to: VertexId, state: S) -> Self {
        Subgraph {
            vertices: vec![from, to],
            edges: vec![EdgeRef::new(from, to)],
            state,
        }
    }

    pub fn from_parts(vertices: Vec<VertexId>, mut edges: Vec<EdgeRef>, state: S) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Subgraph {
            vertices,
            edges,
            state,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeRef) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertices.iter().copied().max()
    }

    /// Vertex ids in ascending order.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut set = self.vertices.clone();
        set.sort_unstable();
        set
    }

    /// Same vertex and edge sets, ignoring insertion order and state.
    pub fn same_shape<T>(&self, other: &Subgraph<T>) -> bool {
        self.edges == other.edges && self.vertex_set() == other.vertex_set()
    }

    /// Adds vertex `v` together with the given edges into the current vertex set.
    pub fn with_vertex<I>(&self, v: VertexId, incident: I, state: S) -> Self
    where
        I: IntoIterator<Item = EdgeRef>,
    {
        let mut vertices = self.vertices.clone();
        vertices.push(v);
        let mut edges = self.edges.clone();
        edges.extend(incident);
        edges.sort_unstable();
        edges.dedup();
        Subgraph {
            vertices,
            edges,
            state,
        }
    }

    /// Adds edge `e`; an endpoint not yet present is appended to the vertex order.
    pub fn with_edge(&self, e: EdgeRef, state: S) -> Self {
        let mut vertices = self.vertices.clone();
        for x in [e.u, e.v] {
            if !vertices.contains(&x) {
                vertices.push(x);
            }
        }
        let mut edges = self.edges.clone();
        if let Err(pos) = edges.binary_search(&e) {
            edges.insert(pos, e);
        }
        Subgraph {
            vertices,
            edges,
            state,
        }
    }
}

/// Payload layout: `u32 n; n × u32 vertices; u32 m; m × (u32, u32) edges;
/// u32 ext_len; ext bytes`.
impl<S: Codec> Codec for Subgraph<S> {
    fn encode(&self, out: &mut Vec<u8>) {
        put_len(out, self.vertices.len());
        for &v in &self.vertices {
            put_u32(out, v);
        }
        put_len(out, self.edges.len());
        for e in &self.edges {
            put_u32(out, e.u);
            put_u32(out, e.v);
        }
        let ext = self.state.to_bytes();
        put_len(out, ext.len());
        out.extend_from_slice(&ext);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        let n = input.count(4)?;
        let vertices = (0..n).map(|_| input.u32()).collect::<Result<Vec<_>, _>>()?;
        let m = input.count(8)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (u, v) = (input.u32()?, input.u32()?);
            if u >= v {
                return Err(CodecError::Invalid(format!("edge ({u}, {v}) is not normalized")));
            }
            edges.push(EdgeRef { u, v });
        }
        let ext_len = input.count(1)?;
        let state = S::from_bytes(input.take(ext_len)?)?;
        Ok(Subgraph::from_parts(vertices, edges, state))
    }
}

/// Subgraphs sharing one grouping key, plus the aggregate folded over them.
#[derive(Clone, Debug)]
pub struct SubgraphGroup<K, S, A> {
    key: K,
    members: Vec<Subgraph<S>>,
    aggregate: A,
}

impl<K, S, A> SubgraphGroup<K, S, A> {
    pub fn new(key: K, aggregate: A) -> Self {
        SubgraphGroup {
            key,
            members: Vec::new(),
            aggregate,
        }
    }

    pub fn key(&self) -> &K {
        &self.key
    }

    pub fn members(&self) -> &[Subgraph<S>] {
        &self.members
    }

    pub fn aggregate(&self) -> &A {
        &self.aggregate
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Adds a member, letting `absorb` fold it into the aggregate first.
    pub fn add(&mut self, member: Subgraph<S>, absorb: impl FnOnce(&mut A, &Subgraph<S>)) {
        absorb(&mut self.aggregate, &member);
        self.members.push(member);
    }
}

/// Payload layout: key, aggregate, `u32 count`, then each member subgraph.
impl<K: Codec, S: Codec, A: Codec> Codec for SubgraphGroup<K, S, A> {
    fn encode(&self, out: &mut Vec<u8>) {
        self.key.encode(out);
        self.aggregate.encode(out);
        self.members.encode(out);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(SubgraphGroup {
            key: K::decode(input)?,
            aggregate: A::decode(input)?,
            members: Vec::decode(input)?,
        })
    }
}
