//! The shift maps R_x on the Witt isotopic pair.
//!
//! R_{f_k} sends e_i to e_{i+k} (and dually R_{e_k} on the f side), with
//! an overall scalar of 1 ("paper") or 1/2 ("half"). The two
//! normalizations are deliberately both first class: the isocommutator
//! values [e_i,e_j]_{f_k} = (i-j)e_{i+j+k} and the r-matrix defining
//! identity [a,b]_x = [R_x a, b] + [a, R_x b] differ by an overall
//! factor 2, so exactly one of the two statements holds under each
//! normalization, and every report names the one it used.

use crate::exact::{rat, ratio, Rat};
use crate::iso::{witt_algebra_bracket, ElementCombo, IsoError, PairPresentation};
use crate::sweep;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Normalization {
    Paper,
    Half,
}

impl Normalization {
    pub fn scalar(&self) -> Rat {
        match self {
            Normalization::Paper => rat(1),
            Normalization::Half => ratio(1, 2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Normalization::Paper => "paper",
            Normalization::Half => "half",
        }
    }
}

/// The map R_x for an isotope generator x = (family, index).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RMatrixMap {
    pub isotope_family: usize,
    pub isotope_index: i64,
    pub normalization: Normalization,
}

impl RMatrixMap {
    /// Linear extension of the shift action (r_apply); acts on the
    /// family opposite to the isotope.
    pub fn apply(&self, a: &ElementCombo) -> Result<ElementCombo, IsoError> {
        if a.family != 1 - self.isotope_family {
            return Err(IsoError::FamilyMismatch);
        }
        let s = self.normalization.scalar();
        let mut out = ElementCombo::zero(a.family);
        for (&i, c) in a.terms() {
            out.add_term(i + self.isotope_index, c * &s);
        }
        Ok(out)
    }
}

/// R_{f_k} acting on the e side.
pub fn r_on_e(k: i64, normalization: Normalization) -> RMatrixMap {
    RMatrixMap { isotope_family: 1, isotope_index: k, normalization }
}

/// R_{e_k} acting on the f side.
pub fn r_on_f(k: i64, normalization: Normalization) -> RMatrixMap {
    RMatrixMap { isotope_family: 0, isotope_index: k, normalization }
}

/// Defining-identity defect (r_identity_defect):
/// ([R_{f_k} e_i, e_j] + [e_i, R_{f_k} e_j]) - [e_i, e_j]_{f_k},
/// brackets being the Witt algebra bracket.
pub fn r_identity_defect(
    p: &PairPresentation,
    i: i64,
    j: i64,
    k: i64,
    normalization: Normalization,
) -> Result<ElementCombo, IsoError> {
    let r = r_on_e(k, normalization);
    let ei = ElementCombo::generator(0, i);
    let ej = ElementCombo::generator(0, j);
    let fk = ElementCombo::generator(1, k);
    let lhs = witt_algebra_bracket(&r.apply(&ei)?, &ej)?
        .add(&witt_algebra_bracket(&ei, &r.apply(&ej)?)?)?;
    let iso = crate::iso::isobracket(p, &ei, &ej, &fk)?;
    lhs.sub(&iso)
}

/// Multiplicativity defect (r_multiplicativity_defect):
/// (R_{f_i} R_{f_j} - R_{f_{i+j}}) e_l, plus the dual check on the f
/// side; one entry per generator l in |l| <= K.
pub fn r_multiplicativity_defect(
    i: i64,
    j: i64,
    k_bound: i64,
    normalization: Normalization,
) -> Result<Vec<(usize, i64, ElementCombo)>, IsoError> {
    let mut out = Vec::new();
    for l in -k_bound..=k_bound {
        let el = ElementCombo::generator(0, l);
        let d = r_on_e(i, normalization)
            .apply(&r_on_e(j, normalization).apply(&el)?)?
            .sub(&r_on_e(i + j, normalization).apply(&el)?)?;
        if !d.is_zero() {
            out.push((0, l, d));
        }
        let fl = ElementCombo::generator(1, l);
        let d = r_on_f(i, normalization)
            .apply(&r_on_f(j, normalization).apply(&fl)?)?
            .sub(&r_on_f(i + j, normalization).apply(&fl)?)?;
        if !d.is_zero() {
            out.push((1, l, d));
        }
    }
    Ok(out)
}

/// Modified Yang-Baxter defect with unit constant (mybe_defect):
/// D = [Ra, Rb] - R([Ra,b] + [a,Rb]) + c [a,b], R = R_{f_k}, a = e_i,
/// b = e_j. Also returns the compensated expression with R^2([a,b]) in
/// place of c [a,b].
pub fn mybe_defect(
    i: i64,
    j: i64,
    k: i64,
    normalization: Normalization,
    constant: &Rat,
) -> Result<(ElementCombo, ElementCombo), IsoError> {
    let r = r_on_e(k, normalization);
    let a = ElementCombo::generator(0, i);
    let b = ElementCombo::generator(0, j);
    let ra = r.apply(&a)?;
    let rb = r.apply(&b)?;
    let lead = witt_algebra_bracket(&ra, &rb)?;
    let mixed = witt_algebra_bracket(&ra, &b)?.add(&witt_algebra_bracket(&a, &rb)?)?;
    let r_mixed = r.apply(&mixed)?;
    let ab = witt_algebra_bracket(&a, &b)?;
    let defect = lead.sub(&r_mixed)?.add(&ab.scale(constant))?;
    let compensated = lead.sub(&r_mixed)?.add(&r.apply(&r.apply(&ab)?)?)?;
    Ok((defect, compensated))
}

/// One row of a defect table.
#[derive(Clone, Debug)]
pub struct DefectRow {
    pub indices: Vec<i64>,
    pub defect: ElementCombo,
}

#[derive(Clone, Debug)]
pub struct RMatrixReport {
    pub check: &'static str,
    pub normalization: Normalization,
    pub k_bound: i64,
    pub rows: Vec<DefectRow>,
}

impl RMatrixReport {
    pub fn passed(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Sweeps one of the defect checks over the index window.
pub fn sweep_defects(
    p: &PairPresentation,
    check: &'static str,
    k_bound: i64,
    normalization: Normalization,
    mybe_constant: &Rat,
) -> Result<RMatrixReport, IsoError> {
    let mut rows = Vec::new();
    match check {
        "identity" => {
            let mut tuples = Vec::new();
            for i in -k_bound..=k_bound {
                for j in -k_bound..=k_bound {
                    for k in -k_bound..=k_bound {
                        tuples.push((i, j, k));
                    }
                }
            }
            let results = sweep::map(tuples, |(i, j, k)| {
                r_identity_defect(p, i, j, k, normalization)
                    .map(|d| ((i, j, k), d))
            });
            for r in results {
                let ((i, j, k), d) = r?;
                if !d.is_zero() {
                    rows.push(DefectRow { indices: vec![i, j, k], defect: d });
                }
            }
        }
        "multiplicativity" => {
            for i in -k_bound..=k_bound {
                for j in -k_bound..=k_bound {
                    for (fam, l, d) in
                        r_multiplicativity_defect(i, j, k_bound, normalization)?
                    {
                        let _ = fam;
                        rows.push(DefectRow { indices: vec![i, j, l], defect: d });
                    }
                }
            }
        }
        "mybe" | "compensated" => {
            for i in -k_bound..=k_bound {
                for j in -k_bound..=k_bound {
                    for k in -k_bound..=k_bound {
                        let (d, comp) = mybe_defect(i, j, k, normalization, mybe_constant)?;
                        let pick = if check == "mybe" { d } else { comp };
                        if !pick.is_zero() {
                            rows.push(DefectRow { indices: vec![i, j, k], defect: pick });
                        }
                    }
                }
            }
        }
        other => panic!("unknown r-matrix check `{other}`"),
    }
    Ok(RMatrixReport { check, normalization, k_bound, rows })
}
