//! Problem-file model: UTF-8 JSON describing a chart, a Lagrangian or a
//! source form, vector fields and the tasks to run.

use serde::{Deserialize, Serialize};
use varseq_core::form::DiffForm;
use varseq_core::parse::{parse_field, parse_form, parse_section};
use varseq_core::{Ctx, JetContext, ProjectableField, Section};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextSpec {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub base: Vec<String>,
    pub fiber: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub xi: Vec<String>,
    #[serde(rename = "Xi")]
    pub eta: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    EulerLagrange,
    Helmholtz,
    Symmetry,
    Noether,
    Nbh,
    OnShell,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::EulerLagrange => "euler_lagrange",
            Task::Helmholtz => "helmholtz",
            Task::Symmetry => "symmetry",
            Task::Noether => "noether",
            Task::Nbh => "nbh",
            Task::OnShell => "on_shell",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub context: ContextSpec,
    #[serde(default)]
    pub lagrangian: Option<String>,
    #[serde(default)]
    pub source_form: Option<String>,
    #[serde(default)]
    pub vector_fields: Vec<FieldSpec>,
    #[serde(default)]
    pub mu: Option<String>,
    #[serde(default)]
    pub sections: Vec<Vec<String>>,
    pub tasks: Vec<Task>,
}

/// Parsed and validated problem, ready for the pipeline.
pub struct Problem {
    pub spec: ProblemSpec,
    pub ctx: Ctx,
    pub lagrangian: Option<DiffForm>,
    pub source_form: Option<DiffForm>,
    pub fields: Vec<(String, ProjectableField)>,
    pub mu: Option<DiffForm>,
    pub sections: Vec<Section>,
}

pub fn max_order_cap() -> usize {
    std::env::var("VARSEQ_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(6)
}

impl Problem {
    pub fn from_spec(spec: ProblemSpec) -> Result<Self, String> {
        let cap = max_order_cap();
        if spec.context.r > cap {
            return Err(format!(
                "jet order {} exceeds VARSEQ_MAX_ORDER = {cap}",
                spec.context.r
            ));
        }
        if spec.tasks.is_empty() {
            return Err("no tasks requested".into());
        }
        if spec.lagrangian.is_none() && spec.source_form.is_none() {
            return Err("at least one of `lagrangian` and `source_form` is required".into());
        }
        let ctx = JetContext::new(
            spec.context.n,
            spec.context.m,
            spec.context.r,
            spec.context.base.clone(),
            spec.context.fiber.clone(),
        )
        .map_err(|e| e.to_string())?;

        let lagrangian = match &spec.lagrangian {
            Some(text) => {
                let f = parse_form(&ctx, text).map_err(|e| e.to_string())?;
                if f.degree() != ctx.base_dim() {
                    return Err(format!(
                        "lagrangian must be a horizontal {}-form",
                        ctx.base_dim()
                    ));
                }
                if !f.is_horizontal() {
                    return Err("lagrangian must be horizontal".into());
                }
                Some(f)
            }
            None => None,
        };
        let source_form = match &spec.source_form {
            Some(text) => {
                let f = parse_form(&ctx, text).map_err(|e| e.to_string())?;
                if f.degree() != ctx.base_dim() + 1 {
                    return Err(format!(
                        "source form must have degree {}",
                        ctx.base_dim() + 1
                    ));
                }
                Some(f)
            }
            None => None,
        };
        let mu = match &spec.mu {
            Some(text) => {
                let f = parse_form(&ctx, text).map_err(|e| e.to_string())?;
                if f.degree() + 1 != ctx.base_dim() || !f.is_horizontal() {
                    return Err(format!(
                        "mu must be a horizontal {}-form",
                        ctx.base_dim() - 1
                    ));
                }
                Some(f)
            }
            None => None,
        };

        let mut fields = Vec::new();
        for (k, fs) in spec.vector_fields.iter().enumerate() {
            let field = parse_field(&ctx, &fs.xi, &fs.eta).map_err(|e| e.to_string())?;
            let name = fs.name.clone().unwrap_or_else(|| format!("field-{}", k + 1));
            fields.push((name, field));
        }

        let mut sections = Vec::new();
        for comps in &spec.sections {
            sections.push(parse_section(&ctx, comps).map_err(|e| e.to_string())?);
        }

        // task/input consistency
        let needs_lagrangian = [Task::EulerLagrange, Task::Noether, Task::Nbh];
        for t in &spec.tasks {
            if needs_lagrangian.contains(t) && lagrangian.is_none() {
                return Err(format!("task `{}` needs a lagrangian", t.name()));
            }
            if *t == Task::Helmholtz && source_form.is_none() && lagrangian.is_none() {
                return Err("task `helmholtz` needs a source form or a lagrangian".into());
            }
            if matches!(t, Task::Symmetry | Task::Noether | Task::Nbh) && fields.is_empty() {
                return Err(format!("task `{}` needs vector fields", t.name()));
            }
        }

        Ok(Problem {
            spec,
            ctx,
            lagrangian,
            source_form,
            fields,
            mu,
            sections,
        })
    }
}
