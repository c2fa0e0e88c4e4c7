use crate::basis::BasisKind;
use crate::error::Result;
use crate::hamiltonian::{assemble, Coupling, HamiltonianForm, HamiltonianSpec};
use crate::numerics::{format_decimal, smallest_eigenvalue, PrecisionContext};
use crate::optimizer::optimize_parameter;

use super::{Provenance, ReferenceEnergy};

/// Basis size of the self-computed reference (HO basis, rotated form).
pub const SELF_REFERENCE_M: usize = 50;
/// Target digits of the self-computed reference.
pub const SELF_REFERENCE_DIGITS: u32 = 40;

// Tabulated M = 35 values (HO basis, rotated form).
const TABULATED: [(u32, &str); 5] = [
    (5, "2.65390977795321535349056980617"),
    (10, "3.01917771477196738691167893635"),
    (100, "5.46097039792335524182772613188"),
    (1000, "11.2324392672098516856244029369"),
    (10000, "23.9459896278189396640103254023"),
];

pub fn paper_references() -> Vec<(Coupling, ReferenceEnergy)> {
    TABULATED
        .iter()
        .map(|(l, v)| {
            (
                Coupling::from_integer(*l),
                ReferenceEnergy {
                    value: (*v).to_string(),
                    provenance: Provenance::Paper,
                },
            )
        })
        .collect()
}

pub fn paper_reference(lambda: &Coupling) -> Option<ReferenceEnergy> {
    paper_references()
        .into_iter()
        .find(|(l, _)| l == lambda)
        .map(|(_, r)| r)
}

/// Ground energy at `M = 50`, HO basis, rotated form, 40 target digits.
pub fn self_computed_reference(lambda: &Coupling) -> Result<ReferenceEnergy> {
    let ctx = PrecisionContext::with_target(SELF_REFERENCE_DIGITS)?;
    let spec = HamiltonianSpec::new(
        lambda.clone(),
        HamiltonianForm::Rotated,
        BasisKind::HarmonicOscillator,
        SELF_REFERENCE_M,
    )?;
    let opt = optimize_parameter(&spec, &ctx)?;
    let h = assemble(&spec, &opt.alpha_opt, &ctx)?;
    let e = smallest_eigenvalue(&h, &ctx)?;
    Ok(ReferenceEnergy {
        value: format_decimal(&e, SELF_REFERENCE_DIGITS as usize),
        provenance: Provenance::SelfComputed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_lookup() {
        let r = paper_reference(&Coupling::from_integer(5)).unwrap();
        assert_eq!(r.value, "2.65390977795321535349056980617");
        assert_eq!(r.provenance, Provenance::Paper);
        assert_eq!(r.significant_digits(), 30);
        assert!(paper_reference(&Coupling::from_integer(7)).is_none());
    }

    #[test]
    fn self_reference_for_uncoupled_case() {
        let r = self_computed_reference(&Coupling::from_integer(0)).unwrap();
        assert_eq!(r.value, format!("2.{}", "0".repeat(39)));
        assert_eq!(r.provenance, Provenance::SelfComputed);
    }
}
