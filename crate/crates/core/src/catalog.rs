//! Named curve systems.
//!
//! The built-in preset is the standard chain `c1, …, c_{2g+1}`: consecutive
//! curves meet once and non-consecutive curves are disjoint. Only the
//! homology classes matter to the engine, and any classes with the chain
//! intersection pattern give the same signatures.

use crate::cycle::VanishingCycle;
use crate::dsl::{parse_statements, Statement};
use crate::error::{Error, Result};
use crate::homology::{GenusContext, HomologyClass};

/// Labelled vanishing cycles, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTable {
    ctx: GenusContext,
    entries: Vec<VanishingCycle>,
}

impl CurveTable {
    pub fn new(ctx: GenusContext) -> Self {
        CurveTable { ctx, entries: Vec::new() }
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    pub fn get(&self, label: &str) -> Option<&VanishingCycle> {
        self.entries.iter().find(|c| c.label() == label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VanishingCycle> {
        self.entries.iter()
    }

    /// Adds a new entry; an existing label is an error.
    pub fn insert(&mut self, cycle: VanishingCycle) -> Result<()> {
        self.check_ctx(&cycle)?;
        if self.get(cycle.label()).is_some() {
            return Err(Error::Validation(format!("duplicate curve label {}", cycle.label())));
        }
        self.entries.push(cycle);
        Ok(())
    }

    /// Adds an entry, replacing any existing entry with the same label.
    pub fn upsert(&mut self, cycle: VanishingCycle) -> Result<()> {
        self.check_ctx(&cycle)?;
        match self.entries.iter_mut().find(|c| c.label() == cycle.label()) {
            Some(slot) => *slot = cycle,
            None => self.entries.push(cycle),
        }
        Ok(())
    }

    /// Entries of `other` added to or overriding this table.
    pub fn extend(&mut self, other: &CurveTable) -> Result<()> {
        for c in other.iter() {
            self.upsert(c.clone())?;
        }
        Ok(())
    }

    fn check_ctx(&self, cycle: &VanishingCycle) -> Result<()> {
        if cycle.ctx() != self.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.genus(),
                right: cycle.ctx().genus(),
            });
        }
        Ok(())
    }
}

/// Homology classes of the chain `c1, …, c_{2g+1}`:
/// `[c1] = a1`, `[c_{2i}] = b_i`, `[c_{2i+1}] = a_i + a_{i+1}`, `[c_{2g+1}] = a_g`.
pub fn chain_classes(ctx: GenusContext) -> Vec<HomologyClass> {
    let g = ctx.genus();
    let mut out = vec![HomologyClass::a(ctx, 1)];
    for i in 1..=g {
        out.push(HomologyClass::b(ctx, i));
        if i < g {
            out.push(
                HomologyClass::a(ctx, i)
                    .add(&HomologyClass::a(ctx, i + 1))
                    .expect("same genus"),
            );
        } else {
            out.push(HomologyClass::a(ctx, g));
        }
    }
    out
}

/// Chain preset with labels `c1 … c_{2g+1}`, plus the conventional aliases
/// `a, b` in genus one and `d1 … d7` in genus three.
pub fn chain_preset(ctx: GenusContext) -> CurveTable {
    let mut table = CurveTable::new(ctx);
    let classes = chain_classes(ctx);
    for (i, class) in classes.iter().enumerate() {
        let cycle = VanishingCycle::nonseparating(format!("c{}", i + 1), class.clone()).expect("chain classes are primitive");
        table.insert(cycle).expect("fresh labels");
    }
    let aliases: Vec<(String, usize)> = match ctx.genus() {
        1 => vec![("a".into(), 0), ("b".into(), 1)],
        3 => (0..7).map(|i| (format!("d{}", i + 1), i)).collect(),
        _ => Vec::new(),
    };
    for (label, i) in aliases {
        let cycle = VanishingCycle::nonseparating(label, classes[i].clone()).expect("primitive");
        table.insert(cycle).expect("fresh labels");
    }
    table
}

/// Looks up a preset by name. Only `chain` exists.
pub fn preset(ctx: GenusContext, name: &str) -> Result<CurveTable> {
    match name {
        "chain" => Ok(chain_preset(ctx)),
        other => Err(Error::Semantic(format!("unknown preset {other:?}"))),
    }
}

/// Parses a curve table: `curve`, `preset` and comment lines only. A
/// `genus` line is accepted if it matches `ctx`. Later entries override
/// preset entries; two `curve` lines with the same label are an error.
pub fn load_table(ctx: GenusContext, document: &str) -> Result<CurveTable> {
    let mut table = CurveTable::new(ctx);
    let mut defined = CurveTable::new(ctx);
    for (stmt, pos) in parse_statements(document)? {
        match stmt {
            Statement::Genus(g) if g == ctx.genus() => {}
            Statement::Genus(g) => {
                return Err(Error::Semantic(format!(
                    "line {}: table is for genus {g}, expected {}",
                    pos.line,
                    ctx.genus()
                )))
            }
            Statement::Preset(name) => table.extend(&preset(ctx, &name)?)?,
            Statement::Curve(def) => defined.insert(def.resolve(ctx, pos)?)?,
            _ => {
                return Err(Error::Parse {
                    line: pos.line,
                    column: pos.column,
                    message: "only curve, preset and genus lines are allowed in a curve table".into(),
                })
            }
        }
    }
    table.extend(&defined)?;
    Ok(table)
}

/// Curve-table lines for a preset, ready to paste into an input document.
pub fn render_table(table: &CurveTable) -> String {
    let mut out = String::new();
    for cycle in table.iter() {
        out.push_str(&crate::dsl::render_curve(cycle));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    #[test]
    fn chain_pattern() {
        for g in 1..=6 {
            let ctx = GenusContext::new(g).unwrap();
            let cs = chain_classes(ctx);
            assert_eq!(cs.len(), 2 * g + 1);
            for i in 0..cs.len() {
                assert!(cs[i].is_primitive());
                for j in 0..cs.len() {
                    let p = cs[i].pairing(&cs[j]).unwrap();
                    if i.abs_diff(j) == 1 {
                        assert_eq!(p.abs(), BigInt::from(1), "g={g} ({i},{j})");
                    } else {
                        assert_eq!(p, BigInt::from(0), "g={g} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn genus_two_classes() {
        let ctx = GenusContext::new(2).unwrap();
        let t = chain_preset(ctx);
        let show: Vec<String> = (1..=5).map(|i| t.get(&format!("c{i}")).unwrap().class().to_string()).collect();
        assert_eq!(show, ["a1", "b1", "a1 + a2", "b2", "a2"]);
    }

    #[test]
    fn aliases() {
        let t1 = chain_preset(GenusContext::new(1).unwrap());
        assert_eq!(t1.get("a").unwrap().class(), t1.get("c1").unwrap().class());
        assert_eq!(t1.get("b").unwrap().class(), t1.get("c2").unwrap().class());
        assert_eq!(t1.get("c3").unwrap().class(), t1.get("c1").unwrap().class());
        let t3 = chain_preset(GenusContext::new(3).unwrap());
        assert_eq!(t3.get("d7").unwrap().class().to_string(), "a3");
        assert!(t3.get("d8").is_none());
    }

    #[test]
    fn presets_are_deterministic() {
        let ctx = GenusContext::new(4).unwrap();
        assert_eq!(render_table(&chain_preset(ctx)), render_table(&chain_preset(ctx)));
    }

    #[test]
    fn load_examples() {
        let ctx = GenusContext::new(2).unwrap();
        let t = load_table(ctx, "curve x 1 0 0 0\ncurve s0 sep 1\n").unwrap();
        assert_eq!(t.get("x").unwrap().class(), HomologyClass::a(ctx, 1));
        assert_eq!(t.get("s0").unwrap().piece_genus(), Some(1));

        assert!(matches!(load_table(ctx, "curve y 2 0 0 0"), Err(Error::Validation(_))));
        assert!(matches!(load_table(ctx, "curve y sep 2"), Err(Error::Validation(_))));
        assert!(matches!(load_table(ctx, "curve x 1 0 0 0\ncurve x 0 1 0 0"), Err(Error::Validation(_))));
        assert!(matches!(load_table(ctx, "curve z 1 0 0"), Err(Error::Semantic(_))));
        assert!(matches!(load_table(ctx, "word x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn user_entries_override_presets() {
        let ctx = GenusContext::new(2).unwrap();
        let t = load_table(ctx, "preset chain\ncurve c1 0 0 1 0\n").unwrap();
        assert_eq!(t.get("c1").unwrap().class(), HomologyClass::a(ctx, 2));
        assert_eq!(t.len(), 5);
    }
}
