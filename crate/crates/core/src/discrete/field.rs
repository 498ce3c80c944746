//! Random node placements on the unit square with a uniform-bucket index
//! for fixed-radius neighbor queries.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point2, ScalingParams};
use crate::output::fmt_float;
use crate::seed::rng_from_seed;
use crate::strategies::RelativeRegion;

/// Angular filter applied on top of the radius test. Angles are absolute
/// and arcs half-open, so the four quadrants of any axis partition the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QueryRegion {
    Disk,
    /// Absolute angles in `[start, start + width)`.
    Arc { start: f64, width: f64 },
    /// Two arcs.
    Arcs([(f64, f64); 2]),
}

impl QueryRegion {
    /// Sector `[phi1, phi2)` measured from `bearing`.
    pub fn sector(phi1: f64, phi2: f64, bearing: f64) -> Self {
        QueryRegion::Arc {
            start: bearing + phi1,
            width: phi2 - phi1,
        }
    }

    /// The quadrant `[axis, axis + pi/2)`.
    pub fn quadrant(axis: f64) -> Self {
        QueryRegion::Arc {
            start: axis,
            width: FRAC_PI_2,
        }
    }

    pub fn from_relative(region: RelativeRegion, bearing: f64) -> Self {
        match region {
            RelativeRegion::Disk => QueryRegion::Disk,
            RelativeRegion::Arc { lo, hi } => QueryRegion::sector(lo, hi, bearing),
            RelativeRegion::TwinArc { lo, hi } => {
                QueryRegion::Arcs([(bearing + lo, hi - lo), (bearing - hi, hi - lo)])
            }
        }
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        let in_arc = |start: f64, width: f64| width >= TAU || (angle - start).rem_euclid(TAU) < width;
        match *self {
            QueryRegion::Disk => true,
            QueryRegion::Arc { start, width } => in_arc(start, width),
            QueryRegion::Arcs(arcs) => arcs.iter().any(|&(s, w)| in_arc(s, w)),
        }
    }
}

/// A neighbor found by a query: node index, displacement from the query
/// point, and distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub dx: f64,
    pub dy: f64,
    pub dist: f64,
}

impl Neighbor {
    pub fn angle(&self) -> f64 {
        self.dy.atan2(self.dx)
    }
}

#[derive(Debug, Clone)]
struct BucketGrid {
    cells: usize,
    side: f64,
    // CSR layout: nodes of cell c are order[start[c]..start[c + 1]]
    start: Vec<u32>,
    order: Vec<u32>,
}

impl BucketGrid {
    fn build(positions: &[Point2], min_side: f64) -> Self {
        let cells = ((1.0 / min_side).floor() as usize).clamp(1, 4096);
        let side = 1.0 / cells as f64;
        let cell_of = |p: &Point2| Self::coord(p.y, cells) * cells + Self::coord(p.x, cells);
        let mut start = vec![0u32; cells * cells + 1];
        for p in positions {
            start[cell_of(p) + 1] += 1;
        }
        for c in 0..cells * cells {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0u32; positions.len()];
        for (i, p) in positions.iter().enumerate() {
            let c = cell_of(p);
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        BucketGrid {
            cells,
            side,
            start,
            order,
        }
    }

    fn coord(v: f64, cells: usize) -> usize {
        ((v * cells as f64).floor().max(0.0) as usize).min(cells - 1)
    }

    fn bucket(&self, cx: usize, cy: usize) -> &[u32] {
        let c = cy * self.cells + cx;
        &self.order[self.start[c] as usize..self.start[c + 1] as usize]
    }
}

/// `n` node positions in `[0, 1]^2` plus a bucket index whose cell side is
/// at least the transmission range.
#[derive(Debug, Clone)]
pub struct NodeField {
    positions: Vec<Point2>,
    range: f64,
    torus: bool,
    grid: BucketGrid,
}

impl NodeField {
    pub fn from_positions(positions: Vec<Point2>, range: f64, torus: bool) -> Result<Self> {
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::domain("NodeField", format!("range must be positive (got {range})")));
        }
        if let Some(bad) = positions
            .iter()
            .find(|p| !(p.is_finite() && (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)))
        {
            return Err(Error::domain("NodeField", format!("position {bad:?} outside the unit square")));
        }
        let grid = BucketGrid::build(&positions, range);
        Ok(NodeField {
            positions,
            range,
            torus,
            grid,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> Point2 {
        self.positions[i]
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn is_torus(&self) -> bool {
        self.torus
    }

    pub fn cell_side(&self) -> f64 {
        self.grid.side
    }

    /// Displacement from `a` to `b` under the field's metric.
    pub fn displacement(&self, a: Point2, b: Point2) -> (f64, f64) {
        let (mut dx, mut dy) = (b.x - a.x, b.y - a.y);
        if self.torus {
            dx = wrap_half(dx);
            dy = wrap_half(dy);
        }
        (dx, dy)
    }

    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        let (dx, dy) = self.displacement(a, b);
        (dx * dx + dy * dy).sqrt()
    }

    /// Index of the node nearest to `p` (lowest index on ties).
    pub fn nearest(&self, p: Point2) -> Option<usize> {
        self.positions
            .iter()
            .enumerate()
            .map(|(i, &q)| (i, self.distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
    }

    fn admit(&self, at: Point2, i: usize, radius: f64, region: &QueryRegion) -> Option<Neighbor> {
        let (dx, dy) = self.displacement(at, self.positions[i]);
        let d2 = dx * dx + dy * dy;
        if d2 == 0.0 || d2 >= radius * radius {
            return None;
        }
        let n = Neighbor {
            index: i,
            dx,
            dy,
            dist: d2.sqrt(),
        };
        (matches!(region, QueryRegion::Disk) || region.contains_angle(n.angle())).then_some(n)
    }

    /// Nodes strictly within `radius` of `at` whose direction falls in
    /// `region`, in ascending index order. A node located exactly at `at` is
    /// excluded.
    pub fn neighbors_within(&self, at: Point2, radius: f64, region: &QueryRegion) -> Vec<Neighbor> {
        let g = &self.grid;
        let cells = g.cells as i64;
        let span = (radius / g.side).ceil() as i64;
        let cx = BucketGrid::coord(at.x, g.cells) as i64;
        let cy = BucketGrid::coord(at.y, g.cells) as i64;
        // on a coarse torus several offsets can wrap onto the same cell
        let may_repeat = self.torus && 2 * span + 1 > cells;
        let mut visited = Vec::new();
        let mut out = Vec::new();
        for oy in -span..=span {
            for ox in -span..=span {
                let (mut x, mut y) = (cx + ox, cy + oy);
                if self.torus {
                    x = x.rem_euclid(cells);
                    y = y.rem_euclid(cells);
                } else if x < 0 || y < 0 || x >= cells || y >= cells {
                    continue;
                }
                if may_repeat {
                    let key = y * cells + x;
                    if visited.contains(&key) {
                        continue;
                    }
                    visited.push(key);
                }
                for &i in g.bucket(x as usize, y as usize) {
                    if let Some(n) = self.admit(at, i as usize, radius, region) {
                        out.push(n);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|n| n.index);
        out
    }

    /// Neighbors within the transmission range.
    pub fn neighbors_in_region(&self, at: Point2, region: &QueryRegion) -> Vec<usize> {
        self.neighbors_within(at, self.range, region)
            .into_iter()
            .map(|n| n.index)
            .collect()
    }

    /// Reference scan over every node.
    pub fn neighbors_brute_force(&self, at: Point2, radius: f64, region: &QueryRegion) -> Vec<usize> {
        (0..self.positions.len())
            .filter(|&i| self.admit(at, i, radius, region).is_some())
            .collect()
    }

    /// Field dump: header `x,y`, one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.positions {
            out.push_str(&format!("{},{}\n", fmt_float(p.x), fmt_float(p.y)));
        }
        out
    }

    pub fn from_csv(text: &str, range: f64, torus: bool) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next().map(str::trim) {
            Some("x,y") => {}
            other => {
                return Err(Error::domain(
                    "NodeField::from_csv",
                    format!("expected header `x,y`, found {other:?}"),
                ))
            }
        }
        let mut positions = Vec::new();
        for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|v| v.trim().parse().ok()).ok_or_else(|| {
                    Error::domain("NodeField::from_csv", format!("bad row {}: {line:?}", row + 2))
                })
            };
            let mut cols = line.split(',');
            positions.push(Point2::new(parse(cols.next())?, parse(cols.next())?));
        }
        Self::from_positions(positions, range, torus)
    }
}

/// Maps a coordinate difference in `[-1, 1]` into `[-0.5, 0.5]`.
fn wrap_half(d: f64) -> f64 {
    if d > 0.5 {
        d - 1.0
    } else if d < -0.5 {
        d + 1.0
    } else {
        d
    }
}

/// `n` i.i.d. uniform nodes; range taken from `scaling`.
pub fn generate_field(scaling: &ScalingParams, seed: u64, torus: bool) -> Result<NodeField> {
    generate_field_with_anchors(scaling, seed, torus, &[])
}

/// Like [`generate_field`] but the first nodes are pinned at `anchors`
/// (e.g. source and destination), keeping the node count at `n`.
pub fn generate_field_with_anchors(
    scaling: &ScalingParams,
    seed: u64,
    torus: bool,
    anchors: &[Point2],
) -> Result<NodeField> {
    let n = scaling.n as usize;
    if n < 2 || anchors.len() > n {
        return Err(Error::domain("generate_field", format!("need n >= 2 and n >= anchors (n={n})")));
    }
    let mut rng = rng_from_seed(seed);
    let mut positions: Vec<Point2> = (0..n)
        .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    positions[..anchors.len()].copy_from_slice(anchors);
    NodeField::from_positions(positions, scaling.m, torus)
}
