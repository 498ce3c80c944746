//! Square tiling of the unit torus, tile interference graph and coloring.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, ScalingParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    /// Tile side after fitting, `1 / tiles_per_axis`.
    pub a: f64,
    /// Unfitted side `sqrt(ln n / n)`.
    pub a_raw: f64,
    pub tiles_per_axis: usize,
}

pub fn build_tiling(scaling: &ScalingParams) -> Result<Tiling> {
    let n = scaling.n as f64;
    let a_raw = (n.ln() / n).sqrt();
    let tiles_per_axis = (1.0 / a_raw).round() as usize;
    if tiles_per_axis < 3 {
        return Err(Error::domain(
            "build_tiling",
            format!("n = {} gives {tiles_per_axis} tiles per axis; need at least 3", scaling.n),
        ));
    }
    Ok(Tiling {
        a: 1.0 / tiles_per_axis as f64,
        a_raw,
        tiles_per_axis,
    })
}

impl Tiling {
    pub fn tile_count(&self) -> usize {
        self.tiles_per_axis * self.tiles_per_axis
    }

    fn axis_index(&self, v: f64) -> usize {
        let t = self.tiles_per_axis;
        ((v.rem_euclid(1.0) * t as f64).floor() as usize).min(t - 1)
    }

    /// Row-major tile index of a point; coordinates wrap.
    pub fn tile_of(&self, p: Point2) -> usize {
        self.axis_index(p.y) * self.tiles_per_axis + self.axis_index(p.x)
    }

    pub fn coords(&self, tile: usize) -> (usize, usize) {
        (tile % self.tiles_per_axis, tile / self.tiles_per_axis)
    }

    pub fn center(&self, tile: usize) -> Point2 {
        let (x, y) = self.coords(tile);
        Point2::new((x as f64 + 0.5) * self.a, (y as f64 + 0.5) * self.a)
    }

    fn wrapped_steps(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.tiles_per_axis - d)
    }

    /// Torus distance between tile centers.
    pub fn center_distance(&self, s: usize, t: usize) -> f64 {
        let ((sx, sy), (tx, ty)) = (self.coords(s), self.coords(t));
        let dx = self.wrapped_steps(sx, tx) as f64 * self.a;
        let dy = self.wrapped_steps(sy, ty) as f64 * self.a;
        dx.hypot(dy)
    }

    /// Whether two tiles share an edge or corner on the torus.
    pub fn touching(&self, s: usize, t: usize) -> bool {
        let ((sx, sy), (tx, ty)) = (self.coords(s), self.coords(t));
        s != t && self.wrapped_steps(sx, tx) <= 1 && self.wrapped_steps(sy, ty) <= 1
    }
}

/// Tiles are adjacent when a transmitter in one and a receiver of a
/// transmitter in the other could be closer than `(1 + guard) * m`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceGraph {
    pub tiling: Tiling,
    pub m: f64,
    pub guard: f64,
    /// Center distance below which tiles interfere.
    pub reach: f64,
    adjacency: Vec<Vec<usize>>,
}

impl InterferenceGraph {
    pub fn build(tiling: Tiling, m: f64, guard: f64) -> Result<Self> {
        if !(guard >= 0.0 && guard.is_finite()) {
            return Err(Error::domain("InterferenceGraph", format!("guard must be >= 0 (got {guard})")));
        }
        // transmitter-to-transmitter distance (2 + guard) m, widened by the
        // largest center offset of two points in their tiles
        let reach = (2.0 + guard) * m + std::f64::consts::SQRT_2 * tiling.a;
        let t = tiling.tiles_per_axis as i64;
        let span = (reach / tiling.a).ceil() as i64;
        let mut offsets = BTreeSet::new();
        for dy in -span..=span {
            for dx in -span..=span {
                let wx = dx.rem_euclid(t);
                let wy = dy.rem_euclid(t);
                if (wx, wy) == (0, 0) {
                    continue;
                }
                let sx = wx.min(t - wx) as f64 * tiling.a;
                let sy = wy.min(t - wy) as f64 * tiling.a;
                if sx.hypot(sy) < reach {
                    offsets.insert((wx, wy));
                }
            }
        }
        let adjacency = (0..tiling.tile_count())
            .map(|tile| {
                let (x, y) = tiling.coords(tile);
                let mut adj: Vec<usize> = offsets
                    .iter()
                    .map(|&(ox, oy)| {
                        let nx = (x as i64 + ox).rem_euclid(t);
                        let ny = (y as i64 + oy).rem_euclid(t);
                        (ny * t + nx) as usize
                    })
                    .collect();
                adj.sort_unstable();
                adj
            })
            .collect();
        Ok(InterferenceGraph {
            tiling,
            m,
            guard,
            reach,
            adjacency,
        })
    }

    /// A graph given directly by adjacency lists (must be symmetric).
    pub fn from_adjacency(tiling: Tiling, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (v, adj) in adjacency.iter().enumerate() {
            if adj.iter().any(|&u| u == v || u >= adjacency.len() || !adjacency[u].contains(&v)) {
                return Err(Error::domain("InterferenceGraph", format!("adjacency of {v} is not symmetric")));
            }
        }
        Ok(InterferenceGraph {
            tiling,
            m: 0.0,
            guard: 0.0,
            reach: 0.0,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Maximum degree.
    pub fn j(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

/// Per-tile colors from a greedy pass in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub colors_used: usize,
}

impl Coloring {
    pub fn is_proper(&self, graph: &InterferenceGraph) -> bool {
        graph.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }

    /// Header `tile,color`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tile,color\n");
        for (t, c) in self.colors.iter().enumerate() {
            out.push_str(&format!("{t},{c}\n"));
        }
        out
    }
}

pub fn color_tiles(graph: &InterferenceGraph) -> Coloring {
    let n = graph.vertex_count();
    let mut colors = vec![usize::MAX; n];
    let mut taken = Vec::new();
    for v in 0..n {
        taken.clear();
        taken.resize(graph.neighbors(v).len() + 1, false);
        for &u in graph.neighbors(v) {
            if let Some(slot) = taken.get_mut(colors[u]) {
                *slot = true;
            }
        }
        colors[v] = taken.iter().position(|&t| !t).unwrap_or(taken.len());
    }
    let colors_used = colors.iter().max().map_or(0, |&c| c + 1);
    Coloring { colors, colors_used }
}
