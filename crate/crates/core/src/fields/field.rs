use crate::error::{Error, Result};

use super::grid::TorusGrid;

/// Real scalar field sampled on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl ScalarField {
    /// Wrap `values`, checking the node count and that every value is finite.
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "scalar field",
                index,
            });
        }
        Ok(Self { grid, values })
    }

    /// Caller guarantees the length; finiteness is checked where it matters
    /// (state validation, stepping).
    pub(crate) fn from_raw(grid: TorusGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: TorusGrid, value: f64) -> Self {
        Self::from_raw(grid, vec![value; grid.len()])
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Sample `f(x, y)` at every node; `y` is zero in one dimension.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let [x, y] = grid.point(i);
                f(x, y)
            })
            .collect();
        Self::from_raw(grid, values)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self::from_raw(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Discrete `L^p` norm with the unnormalized measure `dx^d`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.values, p, self.grid.cell_volume())
    }

    /// Circular shift by `shift` cells along `axis`: `out(x) = self(x + shift·dx)`.
    pub fn shifted(&self, axis: usize, shift: isize) -> Self {
        let values = (0..self.grid.len())
            .map(|i| self.values[self.grid.shifted(i, axis, shift)])
            .collect();
        Self::from_raw(self.grid, values)
    }
}

/// `(Σ |v|^p · w)^{1/p}` with a uniform quadrature weight `w`.
pub fn lp_norm(values: &[f64], p: f64, weight: f64) -> f64 {
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    };
    (sum * weight).powf(1.0 / p)
}

/// `d` scalar components on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: TorusGrid,
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let grid = *components
            .first()
            .ok_or_else(|| Error::Shape("vector field needs components".into()))?
            .grid();
        if components.len() != grid.dim() {
            return Err(Error::Shape(format!(
                "{} components on a {}-d grid",
                components.len(),
                grid.dim()
            )));
        }
        if components.iter().any(|c| *c.grid() != grid) {
            return Err(Error::Shape("vector components live on different grids".into()));
        }
        Ok(Self { grid, components })
    }

    pub(crate) fn from_raw(grid: TorusGrid, components: Vec<ScalarField>) -> Self {
        Self { grid, components }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::from_raw(grid, vec![ScalarField::zeros(grid); grid.dim()])
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self::from_raw(self.grid, self.components.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_raw(
            self.grid,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_components(|f| f.scale(c))
    }

    /// Pointwise product of every component with a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField) -> Self {
        self.map_components(|f| f.mul(s))
    }

    /// Pointwise Euclidean inner product.
    pub fn dot(&self, other: &Self) -> ScalarField {
        let mut acc = ScalarField::zeros(self.grid);
        for (a, b) in self.components.iter().zip(&other.components) {
            for ((o, x), y) in acc.values.iter_mut().zip(a.values()).zip(b.values()) {
                *o += x * y;
            }
        }
        acc
    }

    /// Pointwise squared magnitude.
    pub fn norm_sq(&self) -> ScalarField {
        self.dot(self)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ScalarField::is_finite)
    }
}

/// Symmetric `d×d` tensor field storing the `d(d+1)/2` independent entries,
/// ordered `xx` (1-d) or `xx, xy, yy` (2-d).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensorField {
    grid: TorusGrid,
    components: Vec<ScalarField>,
}

impl SymTensorField {
    pub fn new(grid: TorusGrid, components: Vec<ScalarField>) -> Result<Self> {
        let d = grid.dim();
        if components.len() != d * (d + 1) / 2 {
            return Err(Error::Shape(format!(
                "symmetric tensor on a {d}-d grid needs {} entries, got {}",
                d * (d + 1) / 2,
                components.len()
            )));
        }
        if components.iter().any(|c| *c.grid() != grid) {
            return Err(Error::Shape("tensor entries live on different grids".into()));
        }
        Ok(Self { grid, components })
    }

    pub(crate) fn from_raw(grid: TorusGrid, components: Vec<ScalarField>) -> Self {
        Self { grid, components }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Storage slot of entry `(i, j)`.
    pub fn slot(dim: usize, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        match dim {
            1 => 0,
            _ => a + b,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.components[Self::slot(self.grid.dim(), i, j)]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_raw(
            self.grid,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TorusGrid {
        TorusGrid::periodic(1, 8).unwrap()
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        assert!(matches!(ScalarField::new(grid(), vec![0.0; 7]), Err(Error::Shape(_))));
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(
            ScalarField::new(grid(), v),
            Err(Error::NonFinite { index: 3, .. })
        ));
    }

    #[test]
    fn vector_components_share_grid() {
        let g2 = TorusGrid::periodic(2, 8).unwrap();
        let a = ScalarField::zeros(g2);
        let b = ScalarField::zeros(TorusGrid::new(2, 8, 1.0).unwrap());
        assert!(VectorField::new(vec![a.clone(), b]).is_err());
        assert!(VectorField::new(vec![a.clone()]).is_err());
        assert!(VectorField::new(vec![a.clone(), a]).is_ok());
    }

    #[test]
    fn tensor_slots_are_symmetric() {
        assert_eq!(SymTensorField::slot(2, 0, 1), SymTensorField::slot(2, 1, 0));
        assert_eq!(SymTensorField::slot(2, 1, 1), 2);
        assert_eq!(SymTensorField::slot(1, 0, 0), 0);
    }

    #[test]
    fn lp_norm_of_constant() {
        let f = ScalarField::constant(grid(), 2.0);
        let l = 2.0 * std::f64::consts::PI;
        assert!((f.lp_norm(3.0) - 2.0 * l.powf(1.0 / 3.0)).abs() < 1e-14);
    }
}
