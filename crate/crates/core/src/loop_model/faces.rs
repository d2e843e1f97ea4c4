//! Bulk face operators and boundary triangle tiles.
//!
//! A face is a diamond with its spectral marker on the left corner. Its four
//! edge midpoints are listed as `[nw, ne, se, sw]` in that frame; a square face
//! is the diamond turned a quarter anticlockwise, so `[left, top, right, bottom]`
//! with the marker at the lower-left corner.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tangle::{Alternative, BoundaryItem};
use crate::error::{Error, Result};
use crate::scalars::Spectral;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dense: `[w_H, w_V]`. Dilute: `[w1, .., w6]`.
pub fn face_weights(spec: Spectral, u: Complex64) -> Result<Vec<Complex64>> {
    match spec {
        Spectral::Dense { lambda } => {
            let s = lambda.sin();
            if s.abs() < 1e-12 {
                return Err(Error::Singular(format!("sin(lambda) = 0 at lambda = {lambda}")));
            }
            Ok(vec![(c(lambda) - u).sin() / s, u.sin() / s])
        }
        Spectral::Dilute { phi } => {
            let (s2, s3) = ((2.0 * phi).sin(), (3.0 * phi).sin());
            let p3 = c(3.0 * phi) - u;
            Ok(vec![
                c(s2 * s3) + u.sin() * p3.sin(),
                s2 * p3.sin(),
                s2 * u.sin(),
                u.sin() * p3.sin(),
                (c(2.0 * phi) - u).sin() * p3.sin(),
                -u.sin() * (c(phi) - u).sin(),
            ])
        }
    }
}

/// The value of `u` that crossing symmetry pairs with `u`.
pub fn crossing_point(spec: Spectral) -> f64 {
    match spec {
        Spectral::Dense { lambda } => lambda,
        Spectral::Dilute { phi } => 3.0 * phi,
    }
}

/// Weighted tiles of a face with midpoints `[nw, ne, se, sw]`.
pub fn face(spec: Spectral, u: Complex64, p: [usize; 4]) -> Result<Vec<Alternative>> {
    let w = face_weights(spec, u)?;
    let [nw, ne, se, sw] = p;
    let alt = |w: Complex64, joins: Vec<(usize, usize)>| Alternative::new(w, joins, Vec::new());
    Ok(match spec {
        Spectral::Dense { .. } => vec![alt(w[0], vec![(nw, ne), (sw, se)]), alt(w[1], vec![(nw, sw), (ne, se)])],
        Spectral::Dilute { .. } => vec![
            alt(w[0], vec![]),
            alt(w[1], vec![(sw, se)]),
            alt(w[1], vec![(nw, ne)]),
            alt(w[2], vec![(ne, se)]),
            alt(w[2], vec![(nw, sw)]),
            alt(w[3], vec![(sw, ne)]),
            alt(w[3], vec![(nw, se)]),
            alt(w[4], vec![(nw, ne), (sw, se)]),
            alt(w[5], vec![(nw, sw), (ne, se)]),
        ],
    })
}

/// A boundary triangle's content. Legs `a` and `b` are in boundary order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriangleShape {
    /// The legs joined to each other.
    Arc,
    /// Both legs empty.
    Empty,
    /// Both legs attached; bits mark ghosts in the left, middle and right domains.
    Both { left: bool, middle: bool, right: bool },
    /// One leg attached, one ghost beside it.
    Single { leg_b: bool, ghost_right: bool },
}

impl TriangleShape {
    pub fn items(self, a: usize, b: usize) -> Vec<BoundaryItem> {
        use BoundaryItem::*;
        match self {
            TriangleShape::Arc | TriangleShape::Empty => Vec::new(),
            TriangleShape::Both { left, middle, right } => {
                let mut v = Vec::new();
                if left {
                    v.push(Ghost);
                }
                v.push(Attach(a));
                if middle {
                    v.push(Ghost);
                }
                v.push(Attach(b));
                if right {
                    v.push(Ghost);
                }
                v
            }
            TriangleShape::Single { leg_b, ghost_right } => {
                let p = if leg_b { b } else { a };
                if ghost_right {
                    vec![Attach(p), Ghost]
                } else {
                    vec![Ghost, Attach(p)]
                }
            }
        }
    }

    pub fn joins(self, a: usize, b: usize) -> Vec<(usize, usize)> {
        if self == TriangleShape::Arc {
            vec![(a, b)]
        } else {
            Vec::new()
        }
    }

    pub fn is_dense(self) -> bool {
        matches!(self, TriangleShape::Arc | TriangleShape::Both { .. })
    }

    /// The four even ghost patterns on two attached legs.
    pub fn both_patterns() -> [TriangleShape; 4] {
        let b = |left, middle, right| TriangleShape::Both { left, middle, right };
        [b(false, false, false), b(true, true, false), b(true, false, true), b(false, true, true)]
    }

    /// The four one-leg shapes.
    pub fn single_patterns() -> [TriangleShape; 4] {
        let s = |leg_b, ghost_right| TriangleShape::Single { leg_b, ghost_right };
        [s(false, false), s(false, true), s(true, false), s(true, true)]
    }

    pub fn code(self) -> String {
        match self {
            TriangleShape::Arc => "arc".into(),
            TriangleShape::Empty => "empty".into(),
            TriangleShape::Both { left, middle, right } => {
                format!("both-{}{}{}", left as u8, middle as u8, right as u8)
            }
            TriangleShape::Single { leg_b, ghost_right } => {
                let leg = if leg_b { "b" } else { "a" };
                let g = if ghost_right { "right" } else { "left" };
                format!("single-{leg}-ghost-{g}")
            }
        }
    }
}

/// Tiles of a triangle with legs `[a, b]` from shape weights.
pub fn triangle(weights: &[(TriangleShape, Complex64)], legs: [usize; 2]) -> Vec<Alternative> {
    weights.iter().map(|&(s, w)| Alternative::new(w, s.joins(legs[0], legs[1]), s.items(legs[0], legs[1]))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_face_at_special_points() {
        let spec = Spectral::Dense { lambda: 0.7 };
        let w = face_weights(spec, c(0.0)).unwrap();
        assert!((w[0] - 1.0).norm() < 1e-15 && w[1].norm() < 1e-15);
        let w = face_weights(spec, c(0.7)).unwrap();
        assert!(w[0].norm() < 1e-15 && (w[1] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn dilute_face_at_zero() {
        let phi = 0.31;
        let w = face_weights(Spectral::Dilute { phi }, c(0.0)).unwrap();
        assert!((w[0] - (2.0 * phi).sin() * (3.0 * phi).sin()).norm() < 1e-15);
        for k in [2, 3, 5] {
            assert!(w[k].norm() < 1e-15);
        }
    }

    #[test]
    fn tile_counts() {
        let d = face(Spectral::Dense { lambda: 1.0 }, c(0.2), [0, 1, 2, 3]).unwrap();
        assert_eq!(d.len(), 2);
        let d = face(Spectral::Dilute { phi: 0.4 }, c(0.2), [0, 1, 2, 3]).unwrap();
        assert_eq!(d.len(), 9);
        let dense = 1 + TriangleShape::both_patterns().len();
        let dilute = dense + 1 + TriangleShape::single_patterns().len();
        assert_eq!((dense, dilute), (5, 10));
    }

    #[test]
    fn ghost_parity_per_tile() {
        for s in TriangleShape::both_patterns().into_iter().chain(TriangleShape::single_patterns()) {
            assert_eq!(s.items(0, 1).len() % 2, 0, "{s:?}");
        }
    }

    #[test]
    fn singular_lambda_is_rejected() {
        assert!(face_weights(Spectral::Dense { lambda: 0.0 }, c(0.3)).is_err());
    }
}
