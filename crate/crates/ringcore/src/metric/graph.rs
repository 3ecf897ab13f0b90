use crate::error::{Error, Result};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};

/// Shortest-path metric over an undirected graph with nonnegative edge
/// weights. Point handles are vertex indices.
///
/// Single-source distance arrays are cached per source with LRU eviction; the
/// cache is behind a mutex so concurrent readers stay consistent.
#[derive(Debug)]
pub struct GraphMetric {
    adj: Vec<Vec<(u32, f64)>>,
    cache: Mutex<SsspCache>,
    cache_cap: usize,
}

#[derive(Debug, Default)]
struct SsspCache {
    entries: HashMap<usize, (u64, Arc<Vec<f64>>)>,
    stamp: u64,
}

impl Clone for GraphMetric {
    fn clone(&self) -> Self {
        Self {
            adj: self.adj.clone(),
            cache: Mutex::new(SsspCache::default()),
            cache_cap: self.cache_cap,
        }
    }
}

impl GraphMetric {
    /// Builds the metric over vertices `0..n_vertices`. Edges are undirected;
    /// negative weights are rejected.
    pub fn from_edges(
        n_vertices: usize,
        edges: &[(usize, usize, f64)],
        cache_cap: usize,
    ) -> Result<Self> {
        let mut adj = vec![Vec::new(); n_vertices];
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::Parse {
                    line: line + 1,
                    col: 3,
                    msg: format!("edge weight {w} must be finite and nonnegative"),
                });
            }
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::Parse {
                    line: line + 1,
                    col: 1,
                    msg: format!("edge ({u},{v}) references a vertex >= {n_vertices}"),
                });
            }
            adj[u].push((v as u32, w));
            adj[v].push((u as u32, w));
        }
        Ok(Self {
            adj,
            cache: Mutex::new(SsspCache::default()),
            cache_cap: cache_cap.max(1),
        })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> Result<f64> {
        if x == y {
            return Ok(0.0);
        }
        // Always solve from `y`: callers pass the center second, so the
        // cache holds center trees, and the returned float never depends on
        // what happens to be cached (ulp-stable across thread schedules).
        let dists = {
            let mut cache = self.cache.lock().unwrap();
            if let Some(d) = cache.touch(y) {
                d
            } else {
                let d = Arc::new(self.dijkstra(y));
                cache.insert(y, d.clone(), self.cache_cap);
                d
            }
        };
        finite_or_unreachable(dists[x], x, y)
    }

    fn dijkstra(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Reverse((OrdF64(0.0), source)));
        while let Some(Reverse((OrdF64(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(Reverse((OrdF64(nd), v as usize)));
                }
            }
        }
        dist
    }

    /// Checks that every listed vertex can reach the first one.
    pub fn check_connected(&self, vertices: &[usize]) -> Result<()> {
        let Some(&first) = vertices.first() else {
            return Ok(());
        };
        let dists = self.dijkstra(first);
        for &v in vertices {
            if !dists[v].is_finite() {
                return Err(Error::Unreachable(first, v));
            }
        }
        Ok(())
    }
}

impl SsspCache {
    fn touch(&mut self, source: usize) -> Option<Arc<Vec<f64>>> {
        self.stamp += 1;
        let stamp = self.stamp;
        self.entries.get_mut(&source).map(|e| {
            e.0 = stamp;
            e.1.clone()
        })
    }

    fn insert(&mut self, source: usize, dists: Arc<Vec<f64>>, cap: usize) {
        if self.entries.len() >= cap {
            if let Some((&oldest, _)) = self.entries.iter().min_by_key(|(_, (s, _))| *s) {
                self.entries.remove(&oldest);
            }
        }
        self.stamp += 1;
        self.entries.insert(source, (self.stamp, dists));
    }
}

fn finite_or_unreachable(d: f64, x: usize, y: usize) -> Result<f64> {
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Unreachable(x, y))
    }
}

/// Total order on finite nonnegative distances for the Dijkstra heap.
#[derive(PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
