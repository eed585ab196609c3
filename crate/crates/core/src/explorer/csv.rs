//! CSV output for analysed states.

use std::io::{self, Write};

use super::StateRecord;
use crate::format::format_sig;

pub const HEADER: &str =
    "label,p11,p22,p33,p44,c,s12,s_norm,concurrence,chsh_max,satisfies_santos,violates_chsh";

fn row(record: &StateRecord) -> String {
    let params = match &record.params {
        Some(p) => p.as_array().map(format_sig).join(","),
        None => ",,,,".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{}",
        record.label,
        params,
        format_sig(record.s12),
        format_sig(record.s_norm),
        format_sig(record.concurrence),
        format_sig(record.chsh_max),
        record.satisfies_santos,
        record.violates_chsh,
    )
}

/// Header plus one LF-terminated line per record.
pub fn write_records<W: Write>(mut out: W, records: &[StateRecord]) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for record in records {
        writeln!(out, "{}", row(record))?;
    }
    out.flush()
}

pub fn to_csv_string(records: &[StateRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::{analyze, analyze_xstate};
    use crate::paper;
    use crate::qstate::DensityMatrix;

    #[test]
    fn rho1_row() {
        let record = analyze_xstate(&paper::rho1_params(), "rho1").unwrap();
        let csv = to_csv_string(&[record]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(HEADER));
        assert_eq!(
            lines.next(),
            Some("rho1,0,0.549027,0.449798,0.001175,0.125,0.464999732,0.619999642,0.25,2.05699346,true,true")
        );
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn records_without_params_leave_columns_empty() {
        let mut record = analyze(&DensityMatrix::maximally_mixed()).unwrap();
        record.label = "mixed".into();
        let csv = to_csv_string(&[record]);
        assert_eq!(csv.lines().nth(1), Some("mixed,,,,,,0.75,1,0,0,true,false"));
    }
}
