//! The frozen gadget set used by the reduction, with its stored
//! certification reports and completion templates.

use std::path::Path;

use thiserror::Error;

use super::certify::{CertReport, TemplateTable};
use super::{Gadget, GadgetError, Role};

const FANOUT: &str = include_str!("../../data/gadgets/fanout.gadget");
const FANOUT_CERT: &str = include_str!("../../data/gadgets/fanout.cert");
const VARIABLE: &str = include_str!("../../data/gadgets/variable.gadget");
const VARIABLE_CERT: &str = include_str!("../../data/gadgets/variable.cert");
const CLAUSE: &str = include_str!("../../data/gadgets/clause.gadget");
const CLAUSE_CERT: &str = include_str!("../../data/gadgets/clause.cert");

#[derive(Debug, Error)]
pub enum GadgetSetError {
    #[error("{file}: {source}")]
    Gadget { file: String, source: GadgetError },
    #[error("{file}: {msg}")]
    Cert { file: String, msg: String },
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error("{file}: expected role {expected}, found {found}")]
    Role { file: String, expected: &'static str, found: Role },
}

/// A certified gadget with its report and lookup table.
#[derive(Debug, Clone)]
pub struct Certified {
    pub gadget: Gadget,
    pub report: CertReport,
    pub table: TemplateTable,
}

impl Certified {
    fn load(name: &str, gadget: &str, cert: &str) -> Result<Certified, GadgetSetError> {
        let gadget = Gadget::parse(gadget)
            .map_err(|source| GadgetSetError::Gadget { file: format!("{name}.gadget"), source })?;
        let report = CertReport::parse(cert)
            .map_err(|msg| GadgetSetError::Cert { file: format!("{name}.cert"), msg })?;
        let edges = gadget.graph().edge_count();
        if report.role != gadget.role() || report.templates.iter().any(|t| t.colors.len() != edges) {
            return Err(GadgetSetError::Cert {
                file: format!("{name}.cert"),
                msg: "report does not match the gadget".into(),
            });
        }
        let table = report.table();
        Ok(Certified { gadget, report, table })
    }
}

/// Base fanout, variable and clause gadgets.
#[derive(Debug, Clone)]
pub struct GadgetSet {
    pub fanout: Certified,
    pub variable: Certified,
    pub clause: Certified,
}

impl GadgetSet {
    /// The gadget set compiled into the library.
    pub fn shipped() -> GadgetSet {
        GadgetSet::from_texts(
            [(FANOUT, FANOUT_CERT), (VARIABLE, VARIABLE_CERT), (CLAUSE, CLAUSE_CERT)],
        )
        .expect("shipped gadget data is well formed")
    }

    /// Loads `fanout`, `variable` and `clause` `.gadget`/`.cert` pairs from
    /// a directory.
    pub fn load_dir(dir: &Path) -> Result<GadgetSet, GadgetSetError> {
        let read = |file: String| {
            std::fs::read_to_string(dir.join(&file)).map_err(|source| GadgetSetError::Io { file, source })
        };
        let mut texts = Vec::new();
        for name in ["fanout", "variable", "clause"] {
            texts.push((read(format!("{name}.gadget"))?, read(format!("{name}.cert"))?));
        }
        let [f, v, c] = [&texts[0], &texts[1], &texts[2]].map(|(g, r)| (g.as_str(), r.as_str()));
        GadgetSet::from_texts([f, v, c])
    }

    fn from_texts(texts: [(&str, &str); 3]) -> Result<GadgetSet, GadgetSetError> {
        let [(f, fc), (v, vc), (c, cc)] = texts;
        let fanout = Certified::load("fanout", f, fc)?;
        let variable = Certified::load("variable", v, vc)?;
        let clause = Certified::load("clause", c, cc)?;
        let wrong = |file: &str, expected, found| GadgetSetError::Role { file: file.into(), expected, found };
        match fanout.gadget.role() {
            Role::Fanout(w) if w >= 2 && fanout.gadget.inputs().len() == 1 => {}
            r => return Err(wrong("fanout.gadget", "fanout of width >= 2 with one input", r)),
        }
        if variable.gadget.role() != Role::Variable {
            return Err(wrong("variable.gadget", "variable", variable.gadget.role()));
        }
        if clause.gadget.role() != Role::Clause {
            return Err(wrong("clause.gadget", "clause", clause.gadget.role()));
        }
        Ok(GadgetSet { fanout, variable, clause })
    }

    /// Base fanout width.
    pub fn fanout_width(&self) -> usize {
        self.fanout.gadget.outputs().len()
    }
}
