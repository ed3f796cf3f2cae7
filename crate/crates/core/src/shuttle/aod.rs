use std::fmt;

use serde::{Deserialize, Serialize};

use super::ShuttleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Column (`xs`) and row (`ys`) coordinates of an AOD, in micrometres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AodGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub d_min: f64,
}

impl AodGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, d_min: f64) -> Result<Self, ShuttleError> {
        let g = AodGrid { xs, ys, d_min };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ShuttleError> {
        if !(self.d_min >= 0.0 && self.d_min.is_finite()) {
            return Err(ShuttleError::BadGrid(format!("d_min must be finite and non-negative, got {}", self.d_min)));
        }
        for (axis, coords) in [(Axis::X, &self.xs), (Axis::Y, &self.ys)] {
            if let Some(v) = coords.iter().find(|v| !v.is_finite()) {
                return Err(ShuttleError::BadGrid(format!("{axis} coordinate {v} is not finite")));
            }
            if let Some(i) = (1..coords.len()).find(|&i| coords[i] - coords[i - 1] <= self.d_min) {
                return Err(ShuttleError::BadGrid(format!(
                    "{axis} coordinates {} and {} are not separated by more than d_min",
                    i - 1,
                    i
                )));
            }
        }
        Ok(())
    }
}

/// Per-line displacements: every atom in column `i` moves by `dx[i]`, every
/// atom in row `a` by `dy[a]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MoveViolation {
    LengthMismatch {
        axis: Axis,
        expected: usize,
        got: usize,
    },
    NonFinite {
        axis: Axis,
        index: usize,
    },
    /// Lines `index` and `index + 1` swap order or coincide.
    Crossing {
        axis: Axis,
        index: usize,
    },
    /// Lines `index` and `index + 1` end closer than `d_min`.
    Gap {
        axis: Axis,
        index: usize,
        gap: f64,
    },
}

impl fmt::Display for MoveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveViolation::LengthMismatch { axis, expected, got } => {
                write!(f, "{axis}: expected {expected} displacements, got {got}")
            }
            MoveViolation::NonFinite { axis, index } => write!(f, "{axis}[{index}]: displacement is not finite"),
            MoveViolation::Crossing { axis, index } => {
                write!(f, "{axis}[{index}] and {axis}[{}] cross", index + 1)
            }
            MoveViolation::Gap { axis, index, gap } => {
                write!(f, "{axis}[{index}] and {axis}[{}] end {gap} um apart, not above d_min", index + 1)
            }
        }
    }
}

/// Lines move on simultaneous monotone ramps, so checking the end positions
/// for order and spacing covers the whole motion.
pub fn validate_move(grid: &AodGrid, mv: &Move) -> Vec<MoveViolation> {
    let mut out = Vec::new();
    for (axis, coords, disp) in [(Axis::X, &grid.xs, &mv.dx), (Axis::Y, &grid.ys, &mv.dy)] {
        if coords.len() != disp.len() {
            out.push(MoveViolation::LengthMismatch { axis, expected: coords.len(), got: disp.len() });
            continue;
        }
        let bad: Vec<usize> = (0..disp.len()).filter(|&i| !disp[i].is_finite()).collect();
        if !bad.is_empty() {
            out.extend(bad.into_iter().map(|index| MoveViolation::NonFinite { axis, index }));
            continue;
        }
        let end: Vec<f64> = coords.iter().zip(disp).map(|(c, d)| c + d).collect();
        for i in 1..end.len() {
            let gap = end[i] - end[i - 1];
            if gap <= 0.0 {
                out.push(MoveViolation::Crossing { axis, index: i - 1 });
            } else if gap <= grid.d_min {
                out.push(MoveViolation::Gap { axis, index: i - 1, gap });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs_only(xs: Vec<f64>, d_min: f64) -> AodGrid {
        AodGrid::new(xs, vec![], d_min).unwrap()
    }

    fn dx(v: Vec<f64>) -> Move {
        Move { dx: v, dy: vec![] }
    }

    #[test]
    fn rigid_translation() {
        assert!(validate_move(&xs_only(vec![0.0, 3.0], 1.0), &dx(vec![3.0, 3.0])).is_empty());
    }

    #[test]
    fn crossing() {
        let v = validate_move(&xs_only(vec![0.0, 3.0], 1.0), &dx(vec![4.0, 0.0]));
        assert_eq!(v, vec![MoveViolation::Crossing { axis: Axis::X, index: 0 }]);
    }

    #[test]
    fn gap() {
        let v = validate_move(&xs_only(vec![0.0, 3.0], 1.0), &dx(vec![0.0, -2.5]));
        assert_eq!(v, vec![MoveViolation::Gap { axis: Axis::X, index: 0, gap: 0.5 }]);
    }

    #[test]
    fn malformed_moves() {
        let g = AodGrid::new(vec![0.0, 3.0], vec![0.0], 1.0).unwrap();
        let v = validate_move(&g, &Move { dx: vec![1.0], dy: vec![f64::NAN] });
        assert_eq!(v.len(), 2);
        assert!(matches!(v[0], MoveViolation::LengthMismatch { axis: Axis::X, expected: 2, got: 1 }));
        assert!(matches!(v[1], MoveViolation::NonFinite { axis: Axis::Y, index: 0 }));
    }

    #[test]
    fn bad_grids() {
        assert!(AodGrid::new(vec![0.0, 1.0], vec![], 1.0).is_err());
        assert!(AodGrid::new(vec![1.0, 0.0], vec![], 0.0).is_err());
        assert!(AodGrid::new(vec![], vec![0.0, 2.0], -1.0).is_err());
    }
}
