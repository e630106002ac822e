use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use super::{collection, ObjectiveProblem};
use crate::error::{Error, Result};

/// Which dimensions a registered problem accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DimRule {
    Fixed { n: usize },
    /// Any `n >= min`; `default` is the dimension used in the benchmark table.
    Scalable { min: usize, default: usize },
}

impl DimRule {
    pub fn default_dim(self) -> usize {
        match self {
            DimRule::Fixed { n } => n,
            DimRule::Scalable { default, .. } => default,
        }
    }

    fn check(self, name: &str, dim: usize) -> Result<()> {
        let reason = match self {
            DimRule::Fixed { n } if dim != n => format!("fixed dimension {n}"),
            DimRule::Scalable { min, .. } if dim < min => format!("requires n >= {min}"),
            _ => return Ok(()),
        };
        Err(Error::InvalidDimension {
            name: name.to_owned(),
            dim,
            reason,
        })
    }
}

type Builder = Box<dyn Fn(usize) -> ObjectiveProblem + Send + Sync>;

struct Entry {
    rule: DimRule,
    build: Builder,
}

/// One line of `problems list`.
#[derive(Debug, Clone, Serialize)]
pub struct ProblemInfo {
    pub name: String,
    pub dim: usize,
    pub f_star: Option<f64>,
    pub dims: DimRule,
}

/// Name-indexed problem factories.
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Every closed-form problem shipped with the crate.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        let scalable = |default| DimRule::Scalable { min: 2, default };
        r.register("maxq", scalable(20), collection::maxq);
        r.register("maxl", scalable(20), collection::maxl);
        r.register("l1hilb", scalable(20), collection::l1hilb);
        r.register("cb3", scalable(20), collection::cb3);
        r.register("chained-cb3", scalable(20), collection::chained_cb3);
        r.register("cb2", DimRule::Fixed { n: 2 }, |_| collection::cb2());
        r.register("crescent", DimRule::Fixed { n: 2 }, |_| collection::crescent());
        r.register("demymalo", DimRule::Fixed { n: 2 }, |_| collection::demymalo());
        r.register("shor", DimRule::Fixed { n: 5 }, |_| collection::shor());
        r.register("wong1", DimRule::Fixed { n: 7 }, |_| collection::wong1());
        r.register("maxquad", DimRule::Fixed { n: 10 }, |_| collection::maxquad());
        r
    }

    /// Adds (or replaces) a problem factory. The factory is only called with
    /// dimensions admitted by `rule`.
    pub fn register<F>(&mut self, name: &str, rule: DimRule, build: F)
    where
        F: Fn(usize) -> ObjectiveProblem + Send + Sync + 'static,
    {
        self.entries.insert(
            name.to_owned(),
            Entry {
                rule,
                build: Box::new(build),
            },
        );
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn dim_rule(&self, name: &str) -> Result<DimRule> {
        self.entry(name).map(|e| e.rule)
    }

    pub fn get(&self, name: &str, dim: usize) -> Result<ObjectiveProblem> {
        let entry = self.entry(name)?;
        entry.rule.check(name, dim)?;
        Ok((entry.build)(dim))
    }

    /// Like [`get`](Self::get) at the problem's default dimension.
    pub fn get_default(&self, name: &str) -> Result<ObjectiveProblem> {
        let dim = self.dim_rule(name)?.default_dim();
        self.get(name, dim)
    }

    pub fn list(&self) -> Vec<ProblemInfo> {
        self.entries
            .iter()
            .map(|(name, e)| {
                let dim = e.rule.default_dim();
                ProblemInfo {
                    name: name.clone(),
                    dim,
                    f_star: (e.build)(dim).known_optimum(),
                    dims: e.rule,
                }
            })
            .collect()
    }

    fn entry(&self, name: &str) -> Result<&Entry> {
        self.entries.get(name).ok_or_else(|| Error::UnknownProblem {
            name: name.to_owned(),
            available: self.names(),
        })
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

/// The shared standard registry.
pub fn standard_registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(Registry::standard)
}

/// Looks up `name` in the standard registry at dimension `n`.
pub fn registry_get(name: &str, n: usize) -> Result<ObjectiveProblem> {
    standard_registry().get(name, n)
}
