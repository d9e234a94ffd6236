//! Named views. The built-in table ships inside the crate; user tables in
//! the same TOML format are merged over it by name.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{render_view, ColorScheme, ImageTile, SchemeTag, View};
use crate::critical::resolve_label;
use crate::dynamics::{FamilyKind, IterationParams};
use crate::error::{Error, Result};
use crate::special::{EvalParams, FunctionId};
use crate::viewport::{PixelWindow, Viewport};

const BUILTIN: &str = include_str!("presets.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewKind {
    Portrait,
    DerivativePortrait,
    ParameterPlane,
    Julia,
}

/// Starting point of a parameter plane: a critical-point label such as
/// `"z-15"` or a literal point `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Label(String),
    Point([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub view: ViewKind,
    /// Anything [`FunctionId`] parses: `zeta`, `L(4,2)`, …
    pub function: String,
    #[serde(default)]
    pub family: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[f64; 2]>,
    pub center: [f64; 2],
    pub width: f64,
    pub px_w: u32,
    pub px_h: u32,
    pub scheme: SchemeTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Term count of a plain truncated eta series; accelerated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Coordinates reconstructed by eye rather than known exactly.
    #[serde(default = "approximate_default")]
    pub approximate: bool,
}

fn approximate_default() -> bool {
    true
}

/// A fully resolved render.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderJob {
    pub view: View,
    pub viewport: Viewport,
    pub scheme: ColorScheme,
    pub iteration: IterationParams,
    pub eval: EvalParams,
}

impl RenderJob {
    pub fn render(&self) -> Result<ImageTile> {
        self.render_window(PixelWindow::full(&self.viewport))
    }

    pub fn render_window(&self, win: PixelWindow) -> Result<ImageTile> {
        render_view(
            &self.view,
            &self.viewport,
            win,
            &self.scheme,
            &self.iteration,
            &self.eval,
        )
    }
}

fn point(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Preset {
    pub fn function_id(&self) -> Result<FunctionId> {
        self.function.parse()
    }

    pub fn eval_params(&self) -> EvalParams {
        self.terms.map_or_else(EvalParams::default, EvalParams::truncated)
    }

    /// Resolve labels and build the render. Critical-point labels are
    /// searched for, which may take a moment for unreal ones.
    pub fn resolve(&self) -> Result<RenderJob> {
        let function = self.function_id()?;
        let eval = self.eval_params();
        let missing = |what: &str| Error::InvalidArgument(format!("preset {} needs {what}", self.name));
        let view = match self.view {
            ViewKind::Portrait => View::Portrait { function },
            ViewKind::DerivativePortrait => View::DerivativePortrait { function },
            ViewKind::ParameterPlane => {
                let start = match self.start.as_ref().ok_or_else(|| missing("a start"))? {
                    StartSpec::Point(p) => point(*p),
                    StartSpec::Label(label) => {
                        resolve_label(function, label, &eval)?
                            .ok_or_else(|| Error::InvalidArgument(format!("no critical point {label} for {function}")))?
                            .location
                    }
                };
                View::ParameterPlane {
                    function,
                    family: self.family,
                    start,
                }
            }
            ViewKind::Julia => View::Julia {
                function,
                family: self.family,
                c: point(self.c.ok_or_else(|| missing("a c value"))?),
            },
        };
        let mut iteration = IterationParams::default();
        if let Some(n) = self.max_iter {
            iteration.max_iter = n;
            iteration.history = iteration.history.min(n);
        }
        Ok(RenderJob {
            view,
            viewport: Viewport::new(point(self.center), self.width, self.px_w, self.px_h)?,
            scheme: ColorScheme::new(self.scheme),
            iteration,
            eval,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetTable {
    pub version: u32,
    #[serde(rename = "preset", default)]
    pub presets: Vec<Preset>,
}

impl PresetTable {
    /// The table shipped with the crate.
    pub fn builtin() -> PresetTable {
        PresetTable::from_toml(BUILTIN).expect("built-in preset table is valid")
    }

    pub fn from_toml(text: &str) -> Result<PresetTable> {
        let table: PresetTable =
            toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad preset table: {e}")))?;
        for p in &table.presets {
            p.function_id()?;
            Viewport::new(point(p.center), p.width, p.px_w, p.px_h)?;
        }
        Ok(table)
    }

    /// Add `other`'s presets, replacing those with the same name.
    pub fn merge(&mut self, other: PresetTable) {
        for p in other.presets {
            match self.presets.iter_mut().find(|q| q.name == p.name) {
                Some(slot) => *slot = p,
                None => self.presets.push(p),
            }
        }
        self.version = self.version.max(other.version);
    }

    pub fn get(&self, name: &str) -> Option<&Preset> {
        self.presets.iter().find(|p| p.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.presets.iter().map(|p| p.name.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_resolves() {
        let t = PresetTable::builtin();
        assert!(t.presets.len() >= 10);
        assert!(t.get("fig1-julia0").is_some() && t.get("fig5-plateau").is_some());
        let mut names: Vec<_> = t.names().collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), t.presets.len());
        assert!(t.presets.iter().all(|p| p.approximate));
        let job = t.get("fig5-plateau").unwrap().resolve().unwrap();
        assert!(matches!(job.view, View::ParameterPlane { start, .. } if start == Complex64::new(1000.0, 0.0)));
    }

    #[test]
    fn user_table_merges_by_name() {
        let mut t = PresetTable::builtin();
        let n = t.presets.len();
        let user = PresetTable::from_toml(
            r#"
            version = 1
            [[preset]]
            name = "fig1-julia0"
            view = "julia"
            function = "quadratic"
            c = [0.0, 0.0]
            center = [0.0, 0.0]
            width = 4.0
            px_w = 8
            px_h = 8
            scheme = "escape_steps"

            [[preset]]
            name = "mine"
            view = "portrait"
            function = "L(4,2)"
            center = [0.5, 0.0]
            width = 10.0
            px_w = 8
            px_h = 8
            scheme = "portrait"
            approximate = false
            "#,
        )
        .unwrap();
        t.merge(user);
        assert_eq!(t.presets.len(), n + 1);
        assert_eq!(t.get("fig1-julia0").unwrap().function, "quadratic");
        assert!(!t.get("mine").unwrap().approximate);
        assert!(t.get("mine").unwrap().resolve().unwrap().render().is_ok());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(PresetTable::from_toml("version = ").is_err());
        let bad_fn = r#"
            version = 1
            [[preset]]
            name = "x"
            view = "portrait"
            function = "gamma"
            center = [0.0, 0.0]
            width = 1.0
            px_w = 4
            px_h = 4
            scheme = "portrait"
        "#;
        assert!(PresetTable::from_toml(bad_fn).is_err());
        let no_c = bad_fn
            .replace("\"gamma\"", "\"zeta\"")
            .replace("\"portrait\"\n            function", "\"julia\"\n            function");
        let t = PresetTable::from_toml(&no_c).unwrap();
        assert!(t.presets[0].resolve().is_err());
    }
}
