//! Discrete representations of parameter sets: point clouds and occupancy
//! grids with exact Euclidean distance fields.

use ndarray::{ArrayD, Axis, IxDyn};

use super::GeometryError;

/// How a point cloud was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudSource {
    DeterministicIteration,
    ChaosGame,
}

/// A finite set of points in ℝⁿ standing in for a parameter set `S`.
#[derive(Debug, Clone)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    generation_depth: u32,
    source: CloudSource,
}

impl PointCloud {
    pub fn new(
        dim: usize,
        coords: Vec<f64>,
        generation_depth: u32,
        source: CloudSource,
    ) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyCloud);
        }
        if dim == 0 || coords.len() % dim != 0 {
            return Err(GeometryError::RaggedCoordinates {
                len: coords.len(),
                dim,
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        Ok(Self {
            dim,
            coords,
            generation_depth,
            source,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    pub fn generation_depth(&self) -> u32 {
        self.generation_depth
    }

    pub fn source(&self) -> CloudSource {
        self.source
    }

    /// Flat coordinate buffer, point-major.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter_points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Diagonal length of the bounding box.
    pub fn bounding_box_diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.iter()
            .zip(&hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    /// Cloud with every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|x| x * factor).collect(),
            generation_depth: self.generation_depth,
            source: self.source,
        }
    }
}

/// Occupancy grid over an axis-aligned box, optionally carrying the exact
/// Euclidean distance field to the occupied set.
///
/// Cell `i` covers `origin + i·h .. origin + (i+1)·h` per axis; distances are
/// measured between cell centers, so the field is zero exactly on occupied
/// cells and 1-Lipschitz between neighbours up to `h·√n`.
#[derive(Debug, Clone)]
pub struct GridSet {
    origin: Vec<f64>,
    resolution: f64,
    occupancy: ArrayD<bool>,
    distance: Option<ArrayD<f64>>,
}

impl GridSet {
    /// Rasterize a point cloud: a cell is occupied iff it contains at least
    /// one point. `padding` is physical slack added on every side (at least
    /// the largest tube radius to be measured later).
    pub fn rasterize(
        cloud: &PointCloud,
        resolution: f64,
        padding: f64,
    ) -> Result<Self, GeometryError> {
        let (lo, hi) = cloud.bounding_box();
        let diameter = cloud.bounding_box_diameter();
        if !(resolution > 0.0) || (diameter > 0.0 && resolution > diameter / 8.0) {
            return Err(GeometryError::ResolutionTooCoarse {
                resolution,
                diameter,
            });
        }
        let h = resolution;
        let pad_cells = (padding / h).ceil().max(0.0) as usize;
        let n = cloud.dim();
        let mut origin = Vec::with_capacity(n);
        let mut shape = Vec::with_capacity(n);
        for k in 0..n {
            let extent_cells = ((hi[k] - lo[k]) / h + 1e-9).floor() as usize + 1;
            origin.push(lo[k] - pad_cells as f64 * h);
            shape.push(extent_cells + 2 * pad_cells);
        }
        let mut occupancy = ArrayD::from_elem(IxDyn(&shape), false);
        for p in cloud.iter_points() {
            let idx: Vec<usize> = (0..n)
                .map(|k| {
                    let cell = ((p[k] - origin[k]) / h + 1e-9).floor();
                    (cell.max(0.0) as usize).min(shape[k] - 1)
                })
                .collect();
            occupancy[IxDyn(&idx)] = true;
        }
        Ok(Self {
            origin,
            resolution: h,
            occupancy,
            distance: None,
        })
    }

    /// Grid whose occupied cells are those with center inside the indicated
    /// region; used for solid reference sets (interval, square, disc).
    pub fn from_indicator(
        lo: &[f64],
        hi: &[f64],
        resolution: f64,
        padding: f64,
        inside: impl Fn(&[f64]) -> bool,
    ) -> Result<Self, GeometryError> {
        assert_eq!(lo.len(), hi.len());
        let n = lo.len();
        let h = resolution;
        assert!(h > 0.0, "resolution must be positive");
        let pad_cells = (padding / h).ceil().max(0.0) as usize;
        let mut origin = Vec::with_capacity(n);
        let mut shape = Vec::with_capacity(n);
        for k in 0..n {
            let extent_cells = ((hi[k] - lo[k]) / h - 1e-9).ceil().max(1.0) as usize;
            origin.push(lo[k] - pad_cells as f64 * h);
            shape.push(extent_cells + 2 * pad_cells);
        }
        let mut occupancy = ArrayD::from_elem(IxDyn(&shape), false);
        let mut center = vec![0.0; n];
        let mut any = false;
        for (idx, cell) in occupancy.indexed_iter_mut() {
            for k in 0..n {
                center[k] = origin[k] + (idx[k] as f64 + 0.5) * h;
            }
            if inside(&center) {
                *cell = true;
                any = true;
            }
        }
        if !any {
            return Err(GeometryError::EmptyGrid);
        }
        Ok(Self {
            origin,
            resolution: h,
            occupancy,
            distance: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.occupancy.ndim()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn shape(&self) -> &[usize] {
        self.occupancy.shape()
    }

    pub fn occupancy(&self) -> &ArrayD<bool> {
        &self.occupancy
    }

    pub fn cell_volume(&self) -> f64 {
        self.resolution.powi(self.dim() as i32)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    /// Physical volume represented by the occupied cells.
    pub fn occupied_volume(&self) -> f64 {
        self.cell_volume() * self.occupied_count() as f64
    }

    pub fn cell_center(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + (i as f64 + 0.5) * self.resolution)
            .collect()
    }

    /// Inclusive index bounding box of the occupied cells.
    pub fn occupied_index_box(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.dim();
        let mut lo = vec![usize::MAX; n];
        let mut hi = vec![0usize; n];
        for (idx, &occ) in self.occupancy.indexed_iter() {
            if occ {
                for k in 0..n {
                    lo[k] = lo[k].min(idx[k]);
                    hi[k] = hi[k].max(idx[k]);
                }
            }
        }
        (lo, hi)
    }

    /// Diagonal length of the physical bounding box of the occupied cells.
    pub fn occupied_diameter(&self) -> f64 {
        let (lo, hi) = self.occupied_index_box();
        lo.iter()
            .zip(&hi)
            .map(|(&a, &b)| ((b - a) as f64 * self.resolution).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Occupied cells all of whose axis neighbours are occupied.
    pub fn interior_cell_count(&self) -> usize {
        let shape = self.shape().to_vec();
        let n = self.dim();
        let mut count = 0;
        let mut probe = vec![0usize; n];
        for (idx, &occ) in self.occupancy.indexed_iter() {
            if !occ {
                continue;
            }
            let mut interior = true;
            'axes: for k in 0..n {
                for delta in [-1isize, 1] {
                    let j = idx[k] as isize + delta;
                    if j < 0 || j as usize >= shape[k] {
                        interior = false;
                        break 'axes;
                    }
                    for (t, slot) in probe.iter_mut().enumerate() {
                        *slot = idx[t];
                    }
                    probe[k] = j as usize;
                    if !self.occupancy[IxDyn(&probe)] {
                        interior = false;
                        break 'axes;
                    }
                }
            }
            if interior {
                count += 1;
            }
        }
        count
    }

    /// Compute (or recompute) the exact Euclidean distance field.
    pub fn compute_distance_field(&mut self) {
        let cells = euclidean_distance_cells(&self.occupancy);
        self.distance = Some(cells.mapv(|d| d * self.resolution));
    }

    pub fn has_distance_field(&self) -> bool {
        self.distance.is_some()
    }

    pub fn distance_field(&self) -> Option<&ArrayD<f64>> {
        self.distance.as_ref()
    }

    /// Volume `λₙ(S^ε)` of the tube of radius `epsilon` around the occupied
    /// set, as `hⁿ · #{cells with distance ≤ ε}`.
    pub fn tube_volume(&self, epsilon: f64) -> Result<f64, GeometryError> {
        if epsilon < 2.0 * self.resolution {
            return Err(GeometryError::EpsilonBelowResolution {
                epsilon,
                resolution: self.resolution,
            });
        }
        let distance = self
            .distance
            .as_ref()
            .ok_or(GeometryError::MissingDistanceField)?;
        let count = distance.iter().filter(|&&d| d <= epsilon).count();
        Ok(self.cell_volume() * count as f64)
    }
}

const DT_INF: f64 = 1e30;

/// Exact Euclidean distance (in cell units) from every cell to the nearest
/// `true` cell, via the separable lower-envelope-of-parabolas transform
/// applied axis by axis on squared distances.
pub(crate) fn euclidean_distance_cells(mask: &ArrayD<bool>) -> ArrayD<f64> {
    let mut g = mask.mapv(|occ| if occ { 0.0 } else { DT_INF });
    let max_len = g.shape().iter().copied().max().unwrap_or(0);
    let mut f_buf = vec![0.0; max_len];
    let mut d_buf = vec![0.0; max_len];
    let mut v = vec![0usize; max_len];
    let mut z = vec![0.0; max_len + 1];
    for ax in 0..g.ndim() {
        for mut lane in g.lanes_mut(Axis(ax)) {
            let len = lane.len();
            for (slot, &val) in f_buf.iter_mut().zip(lane.iter()) {
                *slot = val;
            }
            squared_distance_1d(&f_buf[..len], &mut d_buf[..len], &mut v, &mut z);
            for (cell, &val) in lane.iter_mut().zip(d_buf.iter()) {
                *cell = val;
            }
        }
    }
    g.mapv_inplace(f64::sqrt);
    g
}

/// One-dimensional squared distance transform of a sampled function
/// (lower envelope of parabolas).
fn squared_distance_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -DT_INF;
    z[1] = DT_INF;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = DT_INF;
                break;
            }
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *out = diff * diff + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn single_point_cloud() -> PointCloud {
        PointCloud::new(1, vec![0.0], 0, CloudSource::DeterministicIteration).unwrap()
    }

    #[test]
    fn cloud_validation() {
        assert!(matches!(
            PointCloud::new(1, vec![], 0, CloudSource::ChaosGame),
            Err(GeometryError::EmptyCloud)
        ));
        assert!(matches!(
            PointCloud::new(2, vec![0.0, 1.0, 2.0], 0, CloudSource::ChaosGame),
            Err(GeometryError::RaggedCoordinates { .. })
        ));
        assert!(matches!(
            PointCloud::new(1, vec![f64::NAN], 0, CloudSource::ChaosGame),
            Err(GeometryError::NonFiniteCoordinate)
        ));
    }

    #[test]
    fn single_point_occupies_one_cell() {
        let grid = GridSet::rasterize(&single_point_cloud(), 1.0, 0.0).unwrap();
        assert_eq!(grid.occupied_count(), 1);
    }

    #[test]
    fn cantor_depth_eight_occupies_256_cells() {
        // depth-8 prefixes of the middle-thirds set sit in distinct cells at 3^-8
        let mut pts = vec![0.0];
        for _ in 0..8 {
            pts = pts
                .iter()
                .map(|x| x / 3.0)
                .chain(pts.iter().map(|x| x / 3.0 + 2.0 / 3.0))
                .collect();
        }
        let cloud = PointCloud::new(1, pts, 8, CloudSource::DeterministicIteration).unwrap();
        let grid = GridSet::rasterize(&cloud, 3f64.powi(-8), 0.0).unwrap();
        assert_eq!(grid.occupied_count(), 256);
    }

    #[test]
    fn coarse_resolution_rejected() {
        let cloud =
            PointCloud::new(1, vec![0.0, 1.0], 0, CloudSource::DeterministicIteration).unwrap();
        assert!(matches!(
            GridSet::rasterize(&cloud, 0.5, 0.0),
            Err(GeometryError::ResolutionTooCoarse { .. })
        ));
    }

    #[test]
    fn distance_field_is_zero_on_set_and_lipschitz() {
        let cloud = PointCloud::new(
            2,
            vec![0.0, 0.0, 1.0, 0.5],
            0,
            CloudSource::DeterministicIteration,
        )
        .unwrap();
        let mut grid = GridSet::rasterize(&cloud, 0.05, 0.4).unwrap();
        grid.compute_distance_field();
        let dist = grid.distance_field().unwrap();
        let h = grid.resolution();
        for (idx, &occ) in grid.occupancy().indexed_iter() {
            if occ {
                assert_eq!(dist[&idx], 0.0);
            }
        }
        let shape = grid.shape().to_vec();
        for i in 0..shape[0] {
            for j in 1..shape[1] {
                let a = dist[IxDyn(&[i, j - 1])];
                let b = dist[IxDyn(&[i, j])];
                assert!((a - b).abs() <= h * 2f64.sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn tube_volume_of_unit_interval() {
        let cells = 4096usize;
        let h = 1.0 / cells as f64;
        let mut grid = GridSet::from_indicator(&[0.0], &[1.0], h, 0.25, |c| {
            (0.0..=1.0).contains(&c[0])
        })
        .unwrap();
        grid.compute_distance_field();
        let v = grid.tube_volume(0.1).unwrap();
        assert!((v - 1.2).abs() <= 2.0 * h, "volume {v}");
    }

    #[test]
    fn tube_volume_of_unit_square_matches_steiner() {
        let h = 1.0 / 256.0;
        let mut grid = GridSet::from_indicator(&[0.0, 0.0], &[1.0, 1.0], h, 0.15, |c| {
            (0.0..=1.0).contains(&c[0]) && (0.0..=1.0).contains(&c[1])
        })
        .unwrap();
        grid.compute_distance_field();
        let eps = 0.1;
        let v = grid.tube_volume(eps).unwrap();
        let exact = 1.0 + 4.0 * eps + std::f64::consts::PI * eps * eps;
        assert!((v - exact).abs() <= 3.0 * h * 4.0, "volume {v} vs {exact}");
    }

    #[test]
    fn epsilon_below_resolution_rejected() {
        let mut grid = GridSet::rasterize(&single_point_cloud(), 1.0, 4.0).unwrap();
        grid.compute_distance_field();
        assert!(matches!(
            grid.tube_volume(1.5),
            Err(GeometryError::EpsilonBelowResolution { .. })
        ));
        assert_relative_eq!(grid.tube_volume(2.0).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn interior_cells_of_solid_interval() {
        let grid = GridSet::from_indicator(&[0.0], &[1.0], 0.1, 0.0, |c| {
            (0.0..=1.0).contains(&c[0])
        })
        .unwrap();
        assert_eq!(grid.occupied_count(), 10);
        assert_eq!(grid.interior_cell_count(), 8);
    }

    #[test]
    fn point_cloud_rasterization_has_no_interior() {
        let mut pts = vec![0.0];
        for _ in 0..6 {
            pts = pts
                .iter()
                .map(|x| x / 3.0)
                .chain(pts.iter().map(|x| x / 3.0 + 2.0 / 3.0))
                .collect();
        }
        let cloud = PointCloud::new(1, pts, 6, CloudSource::DeterministicIteration).unwrap();
        let grid = GridSet::rasterize(&cloud, 3f64.powi(-6), 0.1).unwrap();
        assert_eq!(grid.interior_cell_count(), 0);
    }
}
