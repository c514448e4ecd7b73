//! JSON extraction reports.

use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{format_scaled, parse_scaled, write_atomic, DataError};
use crate::extraction::{Estimate, ExtractionReport, Method, PeakGmDetail};
use crate::numerics::{LineFit, SampledCurve};

/// A number stored as SI and written multiplied by `10^SHIFT`. Non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy)]
struct Dec<const SHIFT: i32>(f64);

/// SI as written. `Dec<4>` carries m²/(V·s) written as cm²/(V·s).
type Num = Dec<0>;

impl<const SHIFT: i32> Serialize for Dec<SHIFT> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format_scaled(self.0, SHIFT))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de, const SHIFT: i32> Deserialize<'de> for Dec<SHIFT> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Box::<RawValue>::deserialize(d)?;
        let text = raw.get();
        if text == "null" {
            return Ok(Dec(f64::NAN));
        }
        parse_scaled(text, -SHIFT)
            .map(Dec)
            .ok_or_else(|| D::Error::custom(format!("not a number: {text}")))
    }
}

#[derive(Serialize, Deserialize)]
struct Quantity<const SHIFT: i32> {
    value: Dec<SHIFT>,
    sigma: Option<Dec<SHIFT>>,
    unit: String,
}

impl<const SHIFT: i32> Quantity<SHIFT> {
    fn new(e: Estimate, unit: &str) -> Self {
        Self {
            value: Dec(e.value),
            sigma: e.sigma.map(Dec),
            unit: unit.to_owned(),
        }
    }

    fn estimate(&self) -> Estimate {
        Estimate {
            value: self.value.0,
            sigma: self.sigma.map(|s| s.0),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Bounds {
    min: Num,
    max: Num,
    unit: String,
}

#[derive(Serialize, Deserialize)]
struct Resistance {
    value: Num,
    unit: String,
}

#[derive(Serialize, Deserialize)]
struct FitDoc {
    slope: Num,
    intercept: Num,
    r_squared: Num,
    window: [usize; 2],
    x_intercept: Num,
    slope_sigma: Num,
    intercept_sigma: Num,
    x_intercept_sigma: Num,
}

#[derive(Serialize, Deserialize)]
struct CurveDoc<const SHIFT: i32> {
    v_gs: Vec<Num>,
    value: Vec<Dec<SHIFT>>,
    unit: String,
}

impl<const SHIFT: i32> CurveDoc<SHIFT> {
    fn new(c: &SampledCurve, unit: &str) -> Self {
        Self {
            v_gs: c.x().iter().map(|&v| Dec(v)).collect(),
            value: c.y().iter().map(|&v| Dec(v)).collect(),
            unit: unit.to_owned(),
        }
    }

    fn curve(&self) -> Result<SampledCurve, String> {
        SampledCurve::sparse(
            self.v_gs.iter().map(|d| d.0).collect(),
            self.value.iter().map(|d| d.0).collect(),
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct Curves {
    linearized: Option<CurveDoc<0>>,
    theta: Option<CurveDoc<0>>,
    mu_eff: Option<CurveDoc<4>>,
}

#[derive(Serialize, Deserialize)]
struct SweepDoc {
    label: String,
    v_ds: Num,
}

#[derive(Serialize, Deserialize)]
struct PeakDoc {
    v_gs_peak: Num,
    g_m_peak: Num,
    i_ds_peak: Num,
    v_t_max_dgm: Option<Num>,
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    method: String,
    v_t: Quantity<0>,
    mu_0: Option<Quantity<4>>,
    theta_range: Option<Bounds>,
    r_sd: Resistance,
    fit: Option<FitDoc>,
    curves: Curves,
    diagnostics: Vec<String>,
    sweep: SweepDoc,
    peak: Option<PeakDoc>,
}

fn expect_unit(found: &str, wanted: &str) -> Result<(), String> {
    if found == wanted {
        Ok(())
    } else {
        Err(format!("unit {found:?}, expected {wanted:?}"))
    }
}

impl ReportDoc {
    fn from_report(r: &ExtractionReport) -> Self {
        Self {
            method: r.method.as_str().to_owned(),
            v_t: Quantity::new(r.v_t, "V"),
            mu_0: r.mu_0.map(|m| Quantity::new(m, "cm2/Vs")),
            theta_range: r.theta_range.map(|(min, max)| Bounds {
                min: Dec(min),
                max: Dec(max),
                unit: "1/V".into(),
            }),
            r_sd: Resistance {
                value: Dec(r.r_sd_used),
                unit: "ohm".into(),
            },
            fit: r.fit.as_ref().map(|f| FitDoc {
                slope: Dec(f.slope),
                intercept: Dec(f.intercept),
                r_squared: Dec(f.r_squared),
                window: [f.window.start, f.window.end],
                x_intercept: Dec(f.x_intercept),
                slope_sigma: Dec(f.slope_sigma),
                intercept_sigma: Dec(f.intercept_sigma),
                x_intercept_sigma: Dec(f.x_intercept_sigma),
            }),
            curves: Curves {
                linearized: r.linearized.as_ref().map(|c| CurveDoc::new(c, r.method.function_name())),
                theta: r.theta_curve.as_ref().map(|c| CurveDoc::new(c, "1/V")),
                mu_eff: r.mu_eff_curve.as_ref().map(|c| CurveDoc::new(c, "cm2/Vs")),
            },
            diagnostics: r.diagnostics.clone(),
            sweep: SweepDoc {
                label: r.label.clone(),
                v_ds: Dec(r.v_ds),
            },
            peak: r.peak.map(|p| PeakDoc {
                v_gs_peak: Dec(p.v_gs_peak),
                g_m_peak: Dec(p.g_m_peak),
                i_ds_peak: Dec(p.i_ds_peak),
                v_t_max_dgm: p.v_t_max_dgm.map(Dec),
            }),
        }
    }

    fn into_report(self) -> Result<ExtractionReport, String> {
        let method = Method::parse(&self.method).ok_or_else(|| format!("unknown method {:?}", self.method))?;
        expect_unit(&self.v_t.unit, "V")?;
        if let Some(m) = &self.mu_0 {
            expect_unit(&m.unit, "cm2/Vs")?;
        }
        if let Some(b) = &self.theta_range {
            expect_unit(&b.unit, "1/V")?;
        }
        expect_unit(&self.r_sd.unit, "ohm")?;
        if let Some(c) = &self.curves.theta {
            expect_unit(&c.unit, "1/V")?;
        }
        if let Some(c) = &self.curves.mu_eff {
            expect_unit(&c.unit, "cm2/Vs")?;
        }
        let fit = self.fit.map(|f| LineFit {
            slope: f.slope.0,
            intercept: f.intercept.0,
            x_intercept: f.x_intercept.0,
            r_squared: f.r_squared.0,
            window: f.window[0]..f.window[1],
            slope_sigma: f.slope_sigma.0,
            intercept_sigma: f.intercept_sigma.0,
            x_intercept_sigma: f.x_intercept_sigma.0,
        });
        Ok(ExtractionReport {
            method,
            label: self.sweep.label,
            v_ds: self.sweep.v_ds.0,
            v_t: self.v_t.estimate(),
            mu_0: self.mu_0.map(|m| m.estimate()),
            theta_curve: self.curves.theta.map(|c| c.curve()).transpose()?,
            theta_range: self.theta_range.map(|b| (b.min.0, b.max.0)),
            mu_eff_curve: self.curves.mu_eff.map(|c| c.curve()).transpose()?,
            r_sd_used: self.r_sd.value.0,
            fit,
            linearized: self.curves.linearized.map(|c| c.curve()).transpose()?,
            peak: self.peak.map(|p| PeakGmDetail {
                v_gs_peak: p.v_gs_peak.0,
                g_m_peak: p.g_m_peak.0,
                i_ds_peak: p.i_ds_peak.0,
                v_t_max_dgm: p.v_t_max_dgm.map(|d| d.0),
            }),
            diagnostics: self.diagnostics,
        })
    }
}

/// Pretty-printed JSON text of a report, newline-terminated.
pub fn report_to_json(report: &ExtractionReport) -> String {
    let mut s = serde_json::to_string_pretty(&ReportDoc::from_report(report)).expect("report serializes");
    s.push('\n');
    s
}

pub fn report_from_json(text: &str) -> Result<ExtractionReport, DataError> {
    parse_report(Path::new("<memory>"), text)
}

fn parse_report(path: &Path, text: &str) -> Result<ExtractionReport, DataError> {
    let err = |message: String| DataError::Report {
        path: path.to_path_buf(),
        message,
    };
    let doc: ReportDoc = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    doc.into_report().map_err(err)
}

pub fn write_report(report: &ExtractionReport, path: impl AsRef<Path>) -> Result<(), DataError> {
    write_atomic(path.as_ref(), report_to_json(report).as_bytes())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ExtractionReport, DataError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
    parse_report(path, &text)
}
