use serde::Serialize;

use super::cache::GcReport;
use super::Format;
use crate::chords::ChordReport;
use crate::config::CheckReport;
use crate::lie::{hall_words, multidegree_basis, multilinear_rank, Letter};
use crate::tower::{D1Map, E1Column, E2Report, MatchKind};

/// Something the CLI can print as JSON or CSV.
pub trait Report: Serialize {
    /// File name, without extension, under `--out`.
    fn stem(&self) -> String;
    fn csv_header() -> &'static str;
    fn csv_rows(&self) -> Vec<String>;
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

/// Renders each report on its own (`separate`) or all into one document.
pub(super) fn render<R: Report>(reports: &[R], format: Format, separate: bool) -> Vec<(String, String)> {
    let json = |r: &R| {
        let mut s = if separate {
            serde_json::to_string_pretty(r)
        } else {
            serde_json::to_string(r)
        }
        .expect("serializable report");
        s.push('\n');
        s
    };
    let csv = |rs: &[R]| {
        let mut s = format!("{}\n", R::csv_header());
        for r in rs {
            for row in r.csv_rows() {
                s.push_str(&row);
                s.push('\n');
            }
        }
        s
    };
    match (format, separate) {
        (Format::Json, _) => reports.iter().map(|r| (r.stem(), json(r))).collect(),
        (Format::Csv, true) => reports
            .iter()
            .map(|r| (r.stem(), csv(std::slice::from_ref(r))))
            .collect(),
        (Format::Csv, false) => vec![(String::new(), csv(reports))],
    }
}

impl Report for E2Report {
    fn stem(&self) -> String {
        format!("e2-m{}", self.m)
    }

    fn csv_header() -> &'static str {
        "m,convention,experimental,e1_deg0,e1_deg1_free,e1_deg1_torsion2,eta_special,d1_rows,d1_cols,d1_rank,e2_free,e2_torsion,chord_free,chord_torsion,match"
    }

    fn csv_rows(&self) -> Vec<String> {
        let m = match self.matches {
            MatchKind::Integral => "integral",
            MatchKind::Rational => "rational",
            MatchKind::None => "none",
        };
        vec![format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.convention,
            self.experimental,
            self.e1_deg0,
            self.e1_deg1.free,
            self.e1_deg1.torsion2,
            self.e1_deg1.eta_special,
            self.d1.rows,
            self.d1.cols,
            self.d1.rank,
            self.e2.free,
            list(&self.e2.torsion),
            self.chord_side.free,
            list(&self.chord_side.torsion),
            m
        )]
    }
}

impl Report for ChordReport {
    fn stem(&self) -> String {
        format!("chord-m{}", self.m)
    }

    fn csv_header() -> &'static str {
        "m,diagrams,sep_count,fourt_count,free_rank,torsion,signs"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{}",
            self.m,
            self.diagrams,
            self.sep_count,
            self.fourt_count,
            self.free_rank,
            list(&self.torsion),
            self.signs.name()
        )]
    }
}

impl Report for E1Column {
    fn stem(&self) -> String {
        format!("e1-m{}-t{}", self.m, self.total_degree)
    }

    fn csv_header() -> &'static str {
        "m,total_degree,free_rank,torsion_rank,eta_special,lattice_free,lattice_torsion"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{}",
            self.m,
            self.total_degree,
            self.free_rank,
            self.torsion_rank,
            self.eta_special,
            self.lattice.free_rank,
            list(&self.lattice.torsion)
        )]
    }
}

impl Report for D1Map {
    fn stem(&self) -> String {
        format!("d1-m{}", self.m)
    }

    fn csv_header() -> &'static str {
        "m,rows,cols,rank,eta_column"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{}",
            self.m,
            self.matrix.rows(),
            self.matrix.cols(),
            self.rank(),
            self.eta_column
        )]
    }
}

/// The multilinear part of the free Lie ring on `k` letters, counted twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallReport {
    pub k: usize,
    /// From Lyndon words with each letter exactly once.
    pub multilinear_rank: usize,
    /// From all Hall monomials of length `k` on `k` letters, filtered.
    pub hall_count: usize,
    /// `(k - 1)!`.
    pub factorial: u64,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

impl HallReport {
    pub fn compute(k: usize, with_basis: bool) -> Self {
        let letters: Vec<Letter> = (1..=k as Letter).collect();
        let multilinear_rank = multilinear_rank(k);
        let hall_count = hall_words(&letters, k)
            .iter()
            .filter(|m| m.multidegree().values().all(|&c| c == 1))
            .count();
        let factorial: u64 = (1..k as u64).product();
        let basis = with_basis.then(|| {
            let md = letters.iter().map(|&l| (l, 1)).collect();
            multidegree_basis(&md).iter().map(ToString::to_string).collect()
        });
        HallReport {
            k,
            multilinear_rank,
            hall_count,
            factorial,
            matches: multilinear_rank == hall_count && multilinear_rank as u64 == factorial,
            basis,
        }
    }
}

impl Report for HallReport {
    fn stem(&self) -> String {
        format!("hall-k{}", self.k)
    }

    fn csv_header() -> &'static str {
        "k,multilinear_rank,hall_count,factorial,matches"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{}",
            self.k, self.multilinear_rank, self.hall_count, self.factorial, self.matches
        )]
    }
}

impl Report for CheckReport {
    fn stem(&self) -> String {
        "config-check".into()
    }

    fn csv_header() -> &'static str {
        "check,seed,samples,max_error,tolerance,status"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.to_csv().lines().skip(1).map(str::to_string).collect()
    }
}

impl Report for GcReport {
    fn stem(&self) -> String {
        "cache-gc".into()
    }

    fn csv_header() -> &'static str {
        "removed,kept"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!("{},{}", self.removed, self.kept)]
    }
}
