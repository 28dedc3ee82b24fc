//! JSON forms of curves, points and reports.
//!
//! Field elements are coefficient vectors `[a0, .., a_{r-1}]` over `F_p` in the power
//! basis of the canonical modulus root of the field they live in.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{Fe, Field, FieldDesc, MultiPoly};
use crate::counting::{CensusEntry, InflexionCensus};
use crate::curve::{make_curve, PlaneCurve, ProjPoint};
use crate::divisors::LemmaRow;
use crate::error::{Error, Result};
use crate::osculation::{Conic, FncConicsReport};
use crate::theorem::TheoremReport;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    e: Vec<u32>,
    c: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveJson {
    field: FieldDesc,
    poly: Vec<TermJson>,
    #[serde(default = "default_true")]
    homogeneous: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    #[serde(default = "default_m")]
    m: u32,
    coords: Vec<Vec<i64>>,
}

fn default_m() -> u32 {
    1
}

fn element(k: &Field, v: &[i64], path: &str) -> Result<Fe> {
    if v.len() != k.r() as usize {
        return Err(Error::Format(format!(
            "{path}: expected {} residues, got {}",
            k.r(),
            v.len()
        )));
    }
    let p = k.p() as i64;
    if let Some(bad) = v.iter().find(|&&c| c < 0 || c >= p) {
        return Err(Error::Format(format!("{path}: residue {bad} is outside [0, {p})")));
    }
    let cs: Vec<u32> = v.iter().map(|&c| c as u32).collect();
    k.from_coeffs(&cs)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

/// Parses a curve file `{"field", "poly": [{"e", "c"}], "homogeneous"}`.
/// Affine input (`homogeneous: false`, two exponents per term) is homogenized.
pub fn parse_curve(text: &str) -> Result<PlaneCurve> {
    let cj: CurveJson = serde_json::from_str(text).map_err(json_error)?;
    let k = Field::from_desc(&cj.field).map_err(|e| match e {
        Error::Format(m) => Error::Format(m),
        other => Error::Format(format!("field: {other}")),
    })?;
    let nvars = if cj.homogeneous { 3 } else { 2 };
    let mut f = MultiPoly::zero(&k, nvars);
    for (i, t) in cj.poly.iter().enumerate() {
        if t.e.len() != nvars {
            return Err(Error::Format(format!(
                "poly[{i}].e: expected {nvars} exponents, got {}",
                t.e.len()
            )));
        }
        let c = element(&k, &t.c, &format!("poly[{i}].c"))?;
        let e = if cj.homogeneous { [t.e[0], t.e[1], t.e[2]] } else { [t.e[0], t.e[1], 0] };
        f.add_term(e, c);
    }
    make_curve(&f).map_err(|e| match e {
        Error::ZeroPolynomial => Error::Format("poly: zero polynomial".into()),
        Error::NotHomogeneous => Error::Format("poly: terms have different total degrees".into()),
        other => other,
    })
}

pub fn curve_json(c: &PlaneCurve) -> serde_json::Value {
    let k = c.base();
    let poly: Vec<TermJson> = c
        .form()
        .terms()
        .map(|(e, x)| TermJson {
            e: e.to_vec(),
            c: k.coeffs(*x).into_iter().map(i64::from).collect(),
        })
        .collect();
    serde_json::to_value(CurveJson {
        field: k.desc(),
        poly,
        homogeneous: true,
    })
    .expect("curve json")
}

/// Parses `{"m": int, "coords": [[..], [..], [..]]}` as a point over `F_{q^m}` and
/// checks that it lies on `c`.
pub fn parse_point(c: &PlaneCurve, text: &str) -> Result<ProjPoint> {
    let pj: PointJson = serde_json::from_str(text).map_err(json_error)?;
    if pj.m == 0 {
        return Err(Error::Format("m: must be at least 1".into()));
    }
    if pj.coords.len() != 3 {
        return Err(Error::Format(format!("coords: expected 3 coordinates, got {}", pj.coords.len())));
    }
    let k = c.over(pj.m)?.field.clone();
    let mut xs = [Fe::ZERO; 3];
    for (i, v) in pj.coords.iter().enumerate() {
        xs[i] = element(&k, v, &format!("coords[{i}]"))?;
    }
    let pt = ProjPoint::new(&k, pj.m, xs).map_err(|_| Error::Format("coords: all coordinates are zero".into()))?;
    if !c.contains(&pt)? {
        return Err(Error::NotOnCurve);
    }
    Ok(pt)
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ProjPoint", 2)?;
        st.serialize_field("m", &self.m())?;
        st.serialize_field("coords", &self.coeff_vectors())?;
        st.end()
    }
}

impl Serialize for Conic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Conic", 2)?;
        st.serialize_field("chart", &self.chart)?;
        st.serialize_field("coeffs", &self.coeff_vectors())?;
        st.end()
    }
}

impl Serialize for CensusEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CensusEntry", 5)?;
        st.serialize_field("point", &self.point)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("rational", &self.rational)?;
        st.serialize_field("v_R", &self.v_r)?;
        st.end()
    }
}

impl Serialize for InflexionCensus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("InflexionCensus", 7)?;
        st.serialize_field("entries", &self.entries)?;
        st.serialize_field("ram_sum", &self.ram_sum)?;
        st.serialize_field("deg_R", &self.deg_r)?;
        st.serialize_field("complete", &self.complete)?;
        st.serialize_field("k", &self.k())?;
        st.serialize_field("scanned", &self.scanned)?;
        st.serialize_field("skipped", &self.skipped)?;
        st.end()
    }
}

impl Serialize for LemmaRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LemmaRow", 8)?;
        st.serialize_field("point", &self.point)?;
        st.serialize_field("m", &self.point.m())?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("v_R", &self.v_r)?;
        st.serialize_field("v_S", &self.v_s)?;
        st.serialize_field("rational", &self.rational)?;
        st.serialize_field("case", &self.case)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

impl Serialize for FncConicsReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FncConicsReport", 6)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("tested", &self.tested)?;
        st.serialize_field("extensions", &self.extensions)?;
        st.serialize_field("skipped", &self.skipped)?;
        st.serialize_field("extra_m", &self.extra_m)?;
        st.end()
    }
}

impl Serialize for TheoremReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_map(None)?;
        st.serialize_entry("q", &self.q)?;
        st.serialize_entry("d", &self.d)?;
        st.serialize_entry("genus", &self.genus)?;
        st.serialize_entry("hypotheses", &self.hypotheses)?;
        st.serialize_entry("route", &self.route)?;
        st.serialize_entry("N_brute", &self.n_brute)?;
        st.serialize_entry("k", &self.k)?;
        st.serialize_entry("census", &self.census)?;
        st.serialize_entry("N_formula", &self.n_formula)?;
        st.serialize_entry("formula_note", &self.formula_note)?;
        st.serialize_entry("verdict", &self.verdict)?;
        let evidence = Evidence(self);
        st.serialize_entry("evidence", &evidence)?;
        st.serialize_entry("consistency", &self.consistency)?;
        st.end()
    }
}

struct Evidence<'a>(&'a TheoremReport);

impl Serialize for Evidence<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.0;
        let mut st = s.serialize_struct("Evidence", 7)?;
        st.serialize_field("singular_witness", &r.singular_witness)?;
        st.serialize_field("classical_witness", &r.classical_witness)?;
        st.serialize_field("fnc_lines", &r.fnc_lines)?;
        st.serialize_field("generic", &r.generic)?;
        st.serialize_field("condition_b_witness", &r.condition_b_witness)?;
        st.serialize_field("fnc_conics", &r.fnc_conics)?;
        st.serialize_field("condition_2_witness", &r.condition_2_witness)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::curve::enumerate_points;

    const CUBIC: &str = r#"{"field": {"p": 5, "r": 2, "modulus": [2, 0, 1]},
        "poly": [{"e": [3,0,0], "c": [1,0]}, {"e": [0,3,0], "c": [1,0]}, {"e": [0,0,3], "c": [1,0]}],
        "homogeneous": true}"#;

    #[test]
    fn curve_round_trip() {
        let c = parse_curve(CUBIC).unwrap();
        assert_eq!(c.degree(), 3);
        let again = parse_curve(&curve_json(&c).to_string()).unwrap();
        assert_eq!(again.form(), c.form());
    }

    #[test]
    fn affine_input_is_homogenized() {
        let text = r#"{"field": {"p": 5, "r": 1, "modulus": [0, 1]},
            "poly": [{"e": [2,0], "c": [1]}, {"e": [0,2], "c": [1]}, {"e": [0,0], "c": [4]}],
            "homogeneous": false}"#;
        let c = parse_curve(text).unwrap();
        assert_eq!(c.degree(), 2);
        assert_eq!(enumerate_points(&c, 1, &Config::default()).unwrap().len(), 6);
    }

    #[test]
    fn format_errors_name_their_position() {
        let e = parse_curve("{\"field\": {\"p\": 5,").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        let bad = CUBIC.replace("[0,3,0], \"c\": [1,0]", "[0,3,0], \"c\": [1,7]");
        let e = parse_curve(&bad).unwrap_err().to_string();
        assert!(e.contains("poly[1].c"), "{e}");
        let bad = CUBIC.replace("[2, 0, 1]", "[1, 0, 1]");
        assert!(matches!(parse_curve(&bad), Err(Error::Format(_))));
        let bad = CUBIC.replace("[3,0,0]", "[2,0,0]");
        assert!(parse_curve(&bad).unwrap_err().to_string().contains("total degree"));
    }

    #[test]
    fn points_round_trip() {
        let c = parse_curve(CUBIC).unwrap();
        let pts = enumerate_points(&c, 1, &Config::default()).unwrap();
        for p in &pts[..5] {
            let text = serde_json::to_string(p).unwrap();
            assert_eq!(&parse_point(&c, &text).unwrap(), p);
        }
        assert!(matches!(
            parse_point(&c, r#"{"m": 1, "coords": [[1,0],[1,0],[1,0]]}"#),
            Err(Error::NotOnCurve)
        ));
    }
}
