//! Tabular datasets behind the six published figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::AtomFieldParams;
use crate::scan::{figure_axes, scan, Axis, Metric, NodeError, ScanResult, ScanSpec};
use crate::squeezing::{input_vacuum_variance, pure_state_variance};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureMeta {
    pub figure: u8,
    pub description: String,
    pub axes: Vec<Axis>,
    /// Fixed parameters of each panel, in panel order.
    pub fixed: Vec<AtomFieldParams>,
    pub columns: Vec<String>,
    pub artifact_version: String,
    pub errors: Vec<NodeError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: FigureMeta,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

pub fn figure_dataset(figure: u8) -> Result<Dataset> {
    match figure {
        2 => grid_figure(
            2,
            figure_axes::fig2(),
            "in-phase variance over Rabi frequency and squeezing phase",
        ),
        3 => grid_figure(
            3,
            figure_axes::fig3(),
            "in-phase variance over Rabi frequency and detuning",
        ),
        4 => panel_figure(
            4,
            figure_axes::fig4_panel,
            Metric::SX,
            "in-phase variance and purity against Rabi frequency",
        ),
        5 => amplification_figure(),
        6 => grid_figure(
            6,
            figure_axes::fig6(),
            "pi/4 quadrature variance over Rabi frequency and detuning",
        ),
        7 => panel_figure(
            7,
            figure_axes::fig7_panel,
            Metric::SPi4,
            "pi/4 quadrature variance and purity against Rabi frequency",
        ),
        other => Err(Error::InvalidParam {
            field: "figure",
            reason: format!("must be in 2..=7, got {other}"),
        }),
    }
}

fn grid_figure(figure: u8, spec: ScanSpec, description: &str) -> Result<Dataset> {
    let result = scan(&spec)?;
    let axis2 = spec.axis2.expect("grid figures are two-dimensional");
    let columns = vec![
        spec.axis1.name.to_string(),
        axis2.name.to_string(),
        spec.metric.name().to_string(),
    ];
    let rows = result
        .values
        .iter()
        .enumerate()
        .filter_map(|(k, v)| {
            let (a, b) = spec.coordinates(k);
            v.map(|v| vec![a, b.unwrap(), v])
        })
        .collect();
    Ok(Dataset {
        meta: FigureMeta {
            figure,
            description: description.into(),
            axes: vec![spec.axis1, axis2],
            fixed: vec![spec.fixed],
            columns: columns.clone(),
            artifact_version: ARTIFACT_VERSION.into(),
            errors: result.errors,
        },
        columns,
        rows,
    })
}

fn panel_figure(
    figure: u8,
    panel_spec: fn(f64, Metric) -> ScanSpec,
    metric: Metric,
    description: &str,
) -> Result<Dataset> {
    let columns: Vec<String> = ["panel", "n_sq", "omega", metric.name(), "sigma"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    let mut fixed = Vec::new();
    let mut errors = Vec::new();
    let mut axis = None;
    for (panel, &n_sq) in figure_axes::PANEL_N.iter().enumerate() {
        let variance_spec = panel_spec(n_sq, metric);
        let purity_spec = panel_spec(n_sq, Metric::Sigma);
        let variance: ScanResult = scan(&variance_spec)?;
        let purity: ScanResult = scan(&purity_spec)?;
        for (k, (v, s)) in variance.values.iter().zip(&purity.values).enumerate() {
            if let (Some(v), Some(s)) = (v, s) {
                rows.push(vec![
                    panel as f64,
                    n_sq,
                    variance_spec.axis1.value(k),
                    *v,
                    *s,
                ]);
            }
        }
        errors.extend(variance.errors);
        errors.extend(purity.errors);
        fixed.push(variance_spec.fixed);
        axis = Some(variance_spec.axis1);
    }
    Ok(Dataset {
        meta: FigureMeta {
            figure,
            description: description.into(),
            axes: axis.into_iter().collect(),
            fixed,
            columns: columns.clone(),
            artifact_version: ARTIFACT_VERSION.into(),
            errors,
        },
        columns,
        rows,
    })
}

fn amplification_figure() -> Result<Dataset> {
    let axis = figure_axes::fig5_axis();
    let columns: Vec<String> = ["n_sq", "s_x_ps", "s_x_sv"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = axis
        .values()
        .into_iter()
        .map(|n| {
            vec![
                n,
                pure_state_variance(n, 1.0),
                input_vacuum_variance(n, 1.0),
            ]
        })
        .collect();
    Ok(Dataset {
        meta: FigureMeta {
            figure: 5,
            description: "pure-state output variance and input squeezed-vacuum variance against photon number".into(),
            axes: vec![axis],
            fixed: vec![AtomFieldParams::default()],
            columns: columns.clone(),
            artifact_version: ARTIFACT_VERSION.into(),
            errors: Vec::new(),
        },
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplification_curves_cross_near_nine_sixteenths() {
        let d = figure_dataset(5).unwrap();
        assert_eq!(d.rows.len(), 600);
        let crossing = d
            .rows
            .windows(2)
            .find(|w| (w[0][1] - w[0][2]).signum() != (w[1][1] - w[1][2]).signum())
            .unwrap();
        assert!(crossing[0][0] <= 0.5625 && crossing[1][0] >= 0.5625);
    }

    #[test]
    fn unknown_figure_is_rejected() {
        assert!(figure_dataset(1).is_err());
        assert!(figure_dataset(8).is_err());
    }

    #[test]
    fn panel_figure_has_three_panels() {
        let d = figure_dataset(7).unwrap();
        assert_eq!(d.rows.len(), 3 * 601);
        assert_eq!(d.meta.fixed.len(), 3);
        assert_eq!(d.columns, ["panel", "n_sq", "omega", "s_pi4", "sigma"]);
    }
}
