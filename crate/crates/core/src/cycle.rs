use std::fmt;

use crate::error::{Error, Result};
use crate::homology::{inverse_twist_action, twist_action, GenusContext, HomologyClass, SymplecticMap};

/// Whether a vanishing cycle separates the fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CycleKind {
    /// A nonseparating curve, recorded by its (primitive) homology class.
    Nonseparating(HomologyClass),
    /// A separating curve cutting off a piece of genus `piece_genus`.
    Separating { piece_genus: usize },
}

/// One Dehn twist in a monodromy word.
///
/// Separating curves are null-homologous, so they carry only the genus of the
/// smaller piece they cut off. `inverse` marks a negative twist; these only
/// appear in achiral words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VanishingCycle {
    label: String,
    ctx: GenusContext,
    kind: CycleKind,
    inverse: bool,
}

impl VanishingCycle {
    pub fn nonseparating(label: impl Into<String>, class: HomologyClass) -> Result<Self> {
        let label = label.into();
        if !class.is_primitive() {
            return Err(Error::Validation(format!(
                "curve {label}: class {class} is not primitive and nonzero"
            )));
        }
        Ok(VanishingCycle {
            label,
            ctx: class.ctx(),
            kind: CycleKind::Nonseparating(class),
            inverse: false,
        })
    }

    pub fn separating(ctx: GenusContext, label: impl Into<String>, piece_genus: usize) -> Result<Self> {
        let label = label.into();
        if piece_genus < 1 || piece_genus > ctx.genus() / 2 {
            return Err(Error::Validation(format!(
                "curve {label}: separating piece genus {piece_genus} outside 1..={} for genus {}",
                ctx.genus() / 2,
                ctx.genus()
            )));
        }
        Ok(VanishingCycle {
            label,
            ctx,
            kind: CycleKind::Separating { piece_genus },
            inverse: false,
        })
    }

    /// The same curve with the opposite twist direction.
    pub fn inverted(&self) -> Self {
        VanishingCycle {
            inverse: !self.inverse,
            ..self.clone()
        }
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        VanishingCycle {
            label: label.into(),
            ..self.clone()
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    pub fn kind(&self) -> &CycleKind {
        &self.kind
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn is_separating(&self) -> bool {
        matches!(self.kind, CycleKind::Separating { .. })
    }

    pub fn piece_genus(&self) -> Option<usize> {
        match self.kind {
            CycleKind::Separating { piece_genus } => Some(piece_genus),
            CycleKind::Nonseparating(_) => None,
        }
    }

    /// Homology class; zero for separating curves.
    pub fn class(&self) -> HomologyClass {
        match &self.kind {
            CycleKind::Nonseparating(c) => c.clone(),
            CycleKind::Separating { .. } => HomologyClass::zero(self.ctx),
        }
    }

    /// Action of this twist on `H_1`.
    pub fn action(&self) -> SymplecticMap {
        match (&self.kind, self.inverse) {
            (CycleKind::Separating { .. }, _) => SymplecticMap::identity(self.ctx),
            (CycleKind::Nonseparating(c), false) => twist_action(c),
            (CycleKind::Nonseparating(c), true) => inverse_twist_action(c),
        }
    }
}

impl fmt::Display for VanishingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = if self.inverse { "^-1" } else { "" };
        match &self.kind {
            CycleKind::Nonseparating(c) => write!(f, "{}{inv} [{c}]", self.label),
            CycleKind::Separating { piece_genus } => write!(f, "{}{inv} [sep {piece_genus}]", self.label),
        }
    }
}

/// Monodromy of the first `upto` twists of `word`.
///
/// Returns `T_{γ_upto} ∘ … ∘ T_{γ_1}`, so the first twist is applied first;
/// `upto = 0` gives the identity.
pub fn word_monodromy(ctx: GenusContext, word: &[VanishingCycle], upto: usize) -> Result<SymplecticMap> {
    if upto > word.len() {
        return Err(Error::Validation(format!(
            "prefix length {upto} exceeds word length {}",
            word.len()
        )));
    }
    let mut prefix = crate::wall::Prefix::identity(ctx);
    for cycle in &word[..upto] {
        if cycle.ctx() != ctx {
            return Err(Error::ContextMismatch {
                left: ctx.genus(),
                right: cycle.ctx().genus(),
            });
        }
        prefix.push(cycle)?;
    }
    Ok(prefix.to_map())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ctx = GenusContext::new(2).unwrap();
        assert!(VanishingCycle::nonseparating("x", HomologyClass::from_i64(ctx, &[2, 0, 0, 0]).unwrap()).is_err());
        assert!(VanishingCycle::nonseparating("z", HomologyClass::zero(ctx)).is_err());
        assert!(VanishingCycle::separating(ctx, "s", 1).is_ok());
        assert!(VanishingCycle::separating(ctx, "s", 2).is_err());
        assert!(VanishingCycle::separating(GenusContext::new(1).unwrap(), "s", 1).is_err());
    }

    #[test]
    fn prefix_monodromy() {
        let ctx = GenusContext::new(1).unwrap();
        let a = VanishingCycle::nonseparating("a", HomologyClass::a(ctx, 1)).unwrap();
        let b = VanishingCycle::nonseparating("b", HomologyClass::b(ctx, 1)).unwrap();
        let word = vec![a.clone(), b.clone()];
        assert!(word_monodromy(ctx, &word, 0).unwrap().is_identity());
        let phi = word_monodromy(ctx, &word, 2).unwrap();
        // a ↦ a - b, b ↦ a
        assert_eq!(phi.apply(&HomologyClass::a(ctx, 1)).unwrap(), HomologyClass::from_i64(ctx, &[1, -1]).unwrap());
        assert_eq!(phi.apply(&HomologyClass::b(ctx, 1)).unwrap(), HomologyClass::a(ctx, 1));
        assert!(word_monodromy(ctx, &word, 3).is_err());
    }

    #[test]
    fn separating_words_act_trivially() {
        let ctx = GenusContext::new(3).unwrap();
        let s = VanishingCycle::separating(ctx, "s", 1).unwrap();
        let word = vec![s.clone(), s.inverted(), s];
        assert!(word_monodromy(ctx, &word, 3).unwrap().is_identity());
    }
}
