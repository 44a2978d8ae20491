//! Immutable undirected simple graph and edge-list ingestion.
//!
//! Node indices are contiguous in `[0, n)`. The identifiers found in the
//! source file are kept so that results can be reported against them.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};

/// Index of a node inside its owning [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Undirected simple graph in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    original_ids: Vec<u64>,
}

impl Graph {
    /// Builds a graph over nodes `0..n` from an edge iterator. Self-loops are
    /// dropped with a warning and parallel edges are collapsed.
    pub fn from_edges<I>(name: impl Into<String>, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(name.into(), (0..n as u64).collect(), edges)
    }

    fn build<I>(name: String, original_ids: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = original_ids.len();
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut self_loops = 0usize;
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            adjacency[u].push(NodeId(v));
            adjacency[v].push(NodeId(u));
        }
        if self_loops > 0 {
            warn!("{name}: dropped {self_loops} self-loop(s)");
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in adjacency {
            list.sort_unstable();
            list.dedup();
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(Self {
            name,
            offsets,
            targets,
            original_ids,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of nodes.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + Clone {
        (0..self.n()).map(NodeId)
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.n()
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v.0,
                n: self.n(),
            })
        }
    }

    /// Sorted neighbor list. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v.0]..self.offsets[v.0 + 1]]
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.neighbors(v).len())
    }

    /// Position of the directed arc `v -> neighbors(v)[i]` in the flat arc
    /// array; unique per arc and stable for the lifetime of the graph.
    #[inline]
    pub(crate) fn arc_offset(&self, v: NodeId) -> usize {
        self.offsets[v.0]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains(u) && self.contains(v) && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Identifier the node carried in its source file.
    pub fn original_id(&self, v: NodeId) -> u64 {
        self.original_ids[v.0]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// Verifies undirectedness and simplicity of every adjacency list.
    pub fn is_symmetric_simple(&self) -> bool {
        self.nodes().all(|u| {
            let list = self.neighbors(u);
            list.windows(2).all(|w| w[0] < w[1])
                && list
                    .iter()
                    .all(|&v| v != u && self.neighbors(v).binary_search(&u).is_ok())
        })
    }

    /// Nodes at distance one (`hops == 1`) or exactly two (`hops == 2`) from
    /// the set `seeds`, excluding the seeds themselves. Sorted ascending.
    pub fn neighborhood(&self, seeds: &[NodeId], hops: u8) -> Result<Vec<NodeId>> {
        if !(1..=2).contains(&hops) {
            return Err(crate::error::invalid(
                "hops",
                format!("{hops} not in {{1, 2}}"),
            ));
        }
        for &s in seeds {
            self.check_node(s)?;
        }
        // 0 = unseen, 1 = seed, 2 = first ring, 3 = second ring
        let mut mark = vec![0u8; self.n()];
        for &s in seeds {
            mark[s.0] = 1;
        }
        let mut ring = Vec::new();
        for &s in seeds {
            for &u in self.neighbors(s) {
                if mark[u.0] == 0 {
                    mark[u.0] = 2;
                    ring.push(u);
                }
            }
        }
        if hops == 2 {
            let mut outer = Vec::new();
            for &u in &ring {
                for &w in self.neighbors(u) {
                    if mark[w.0] == 0 {
                        mark[w.0] = 3;
                        outer.push(w);
                    }
                }
            }
            ring = outer;
        }
        ring.sort_unstable();
        Ok(ring)
    }

    /// Canonical edge-list form: `# n=<n> m=<m>` header, then `u v` per line
    /// with 0-based indices, `u < v`, sorted.
    pub fn write_canonical<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# n={} m={}", self.n(), self.m())?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", u.0, v.0)?;
        }
        out.flush()
    }

    pub fn save_canonical(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        self.write_canonical(io::BufWriter::new(file))
            .map_err(io_err)
    }
}

/// Whether node identifiers in a file start at zero or one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdBase {
    #[default]
    Zero,
    One,
}

impl IdBase {
    pub fn value(self) -> u64 {
        match self {
            IdBase::Zero => 0,
            IdBase::One => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Any run of spaces or tabs.
    #[default]
    Whitespace,
    Char(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderPolicy {
    /// Skip the dimension line of a Matrix Market file; nothing otherwise.
    #[default]
    Auto,
    None,
    /// Unconditionally skip the first non-comment line.
    SkipFirst,
}

/// How to read one edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetDescriptor {
    pub path: PathBuf,
    pub name: String,
    pub id_base: IdBase,
    pub delimiter: Delimiter,
    pub comment_prefixes: Vec<String>,
    pub header: HeaderPolicy,
}

impl DatasetDescriptor {
    /// Descriptor with the default policies; the dataset is named after the
    /// file stem.
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".to_owned());
        Self {
            path,
            name,
            id_base: IdBase::Zero,
            delimiter: Delimiter::Whitespace,
            comment_prefixes: vec!["%".to_owned(), "#".to_owned()],
            header: HeaderPolicy::Auto,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_id_base(mut self, id_base: IdBase) -> Self {
        self.id_base = id_base;
        self
    }

    pub fn with_header(mut self, header: HeaderPolicy) -> Self {
        self.header = header;
        self
    }

    pub fn with_delimiter(mut self, delimiter: Delimiter) -> Self {
        self.delimiter = delimiter;
        self
    }
}

/// Reads an edge list described by `descriptor`.
pub fn load_edge_list(descriptor: &DatasetDescriptor) -> Result<Graph> {
    let file = File::open(&descriptor.path).map_err(|source| Error::Io {
        path: descriptor.path.clone(),
        source,
    })?;
    parse_edge_list(descriptor, BufReader::new(file))
}

/// Parses edge-list text from any reader; `descriptor.path` is used only in
/// error messages.
pub fn parse_edge_list<R: BufRead>(descriptor: &DatasetDescriptor, reader: R) -> Result<Graph> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: descriptor.path.clone(),
        line,
        reason,
    };
    let base = descriptor.id_base.value();

    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut declared_nodes: Option<u64> = None;
    let mut matrix_market = false;
    let mut seen_data_line = false;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: descriptor.path.clone(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if descriptor
            .comment_prefixes
            .iter()
            .any(|p| trimmed.starts_with(p.as_str()))
        {
            if trimmed.starts_with("%%MatrixMarket") {
                matrix_market = true;
            } else if let Some(n) = canonical_node_count(trimmed) {
                declared_nodes = Some(n);
            }
            continue;
        }

        let fields: Vec<&str> = match &descriptor.delimiter {
            Delimiter::Whitespace => trimmed.split_whitespace().collect(),
            Delimiter::Char(c) => trimmed.split(*c).map(str::trim).collect(),
        };

        let first_data_line = !seen_data_line;
        seen_data_line = true;
        let skip = match descriptor.header {
            HeaderPolicy::SkipFirst => first_data_line,
            HeaderPolicy::Auto => first_data_line && matrix_market && fields.len() == 3,
            HeaderPolicy::None => false,
        };
        if skip {
            continue;
        }

        if fields.len() < 2 {
            return Err(parse_err(
                lineno,
                format!("expected two node ids, got {trimmed:?}"),
            ));
        }
        let mut ids = [0u64; 2];
        for (slot, field) in ids.iter_mut().zip(&fields) {
            *slot = field
                .parse::<u64>()
                .map_err(|_| parse_err(lineno, format!("invalid node id {field:?}")))?;
            if *slot < base {
                return Err(parse_err(
                    lineno,
                    format!("node id {slot} below id base {base}"),
                ));
            }
        }
        if let Some(w) = fields.get(2) {
            if w.parse::<f64>().is_err() {
                return Err(parse_err(lineno, format!("invalid weight {w:?}")));
            }
        }
        raw_edges.push((ids[0], ids[1]));
    }

    let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    if let Some(n) = declared_nodes {
        ids.extend(0..n);
    }
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::EmptyGraph(descriptor.name.clone()));
    }
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges = raw_edges.iter().map(|(u, v)| (index[u], index[v]));
    Graph::build(descriptor.name.clone(), ids, edges)
}

/// Recognizes the `# n=<n> m=<m>` header written by [`Graph::write_canonical`].
fn canonical_node_count(line: &str) -> Option<u64> {
    let rest = line.strip_prefix('#')?.trim();
    let mut parts = rest.split_whitespace();
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    parts.next()?.strip_prefix("m=")?.parse::<u64>().ok()?;
    Some(n)
}
