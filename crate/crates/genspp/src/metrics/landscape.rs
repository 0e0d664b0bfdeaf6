//! Loss-landscape grid comparing the evolved objective against the plain
//! averaged selective-rationalization cost over the (task loss,
//! regularizer) square.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeRow {
    pub l_t: f64,
    pub omega: f64,
    /// 1 - sqrt((1 - omega) * (1 - min(l_t, 1))), feasibility cutoff
    /// disabled so the surface covers the whole square.
    pub h_tilde: f64,
    /// Plain averaged cost (l_t + omega) / 2.
    pub mean_cost: f64,
    /// Flags the two reference points (0.0, 1.0) and (0.5, 0.5) that share
    /// the same mean cost but very different h_tilde.
    pub marker: bool,
}

pub fn landscape_point(l_t: f64, omega: f64) -> (f64, f64) {
    let inner = ((1.0 - omega) * (1.0 - l_t.min(1.0))).max(0.0);
    (1.0 - inner.sqrt(), (l_t + omega) / 2.0)
}

/// Uniform `resolution` x `resolution` grid over [0, 1]^2 in row-major
/// order (l_t outer, omega inner).
pub fn loss_landscape_grid(resolution: usize) -> Result<Vec<LandscapeRow>> {
    if resolution < 2 {
        return Err(Error::Config("landscape resolution must be >= 2".into()));
    }
    let step = 1.0 / (resolution - 1) as f64;
    let mut rows = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let l_t = i as f64 * step;
        for j in 0..resolution {
            let omega = j as f64 * step;
            let (h_tilde, mean_cost) = landscape_point(l_t, omega);
            let marker = (l_t == 0.0 && omega == 1.0)
                || ((l_t - 0.5).abs() < 1e-12 && (omega - 0.5).abs() < 1e-12);
            rows.push(LandscapeRow {
                l_t,
                omega,
                h_tilde,
                mean_cost,
                marker,
            });
        }
    }
    Ok(rows)
}

pub fn landscape_csv(rows: &[LandscapeRow]) -> String {
    let mut out = String::from("l_t,omega,h_tilde,mean_cost,marker\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6},{:.6},{:.12},{:.12},{}\n",
            r.l_t,
            r.omega,
            r.h_tilde,
            r.mean_cost,
            u8::from(r.marker)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        let (h, cost) = landscape_point(0.0, 1.0);
        assert_eq!(h, 1.0);
        assert_eq!(cost, 0.5);
        let (h, cost) = landscape_point(0.5, 0.5);
        assert!((h - 0.5).abs() < 1e-12);
        assert_eq!(cost, 0.5);
        let (h, cost) = landscape_point(0.0, 0.0);
        assert_eq!(h, 0.0);
        assert_eq!(cost, 0.0);
    }

    #[test]
    fn grid_shape_and_markers() {
        let rows = loss_landscape_grid(101).unwrap();
        assert_eq!(rows.len(), 10201);
        let markers: Vec<_> = rows.iter().filter(|r| r.marker).collect();
        assert_eq!(markers.len(), 2);
        for m in markers {
            assert!((m.mean_cost - 0.5).abs() < 1e-12);
        }
        assert!(loss_landscape_grid(1).is_err());
    }

    #[test]
    fn csv_is_stable() {
        let rows = loss_landscape_grid(3).unwrap();
        let a = landscape_csv(&rows);
        let b = landscape_csv(&loss_landscape_grid(3).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 10);
    }
}
