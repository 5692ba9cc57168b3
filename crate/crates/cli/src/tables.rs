//! The three built-in benchmark tables: computed fresh on every run
//! and checked against embedded reference values in the footer.

use bosonaim::aim::{solve_expression, solve_su2, AimOptions};
use bosonaim::models::{
    anharmonic_hamiltonian, bistable_hamiltonian, AnharmonicParams, BistableParams, HalfInt,
    Su2Model,
};
use serde::Deserialize;

use crate::output::sig10;

const REFERENCE_JSON: &str = include_str!("../data/reference_tables.json");

#[derive(Debug, Deserialize)]
struct ReferenceTables {
    #[allow(dead_code)]
    description: String,
    anharmonic: AnharmonicRef,
    bistable: BistableRef,
    su2: Su2Ref,
}

#[derive(Debug, Deserialize)]
struct AnharmonicRef {
    alpha: f64,
    levels: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct BistableRef {
    omega: f64,
    columns: Vec<BistableColumn>,
}

#[derive(Debug, Deserialize)]
struct BistableColumn {
    label: String,
    kappa: f64,
    omega_nl: f64,
    levels: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct Su2Ref {
    omega: f64,
    s: u32,
    j: i64,
    kappas: Vec<f64>,
    rows: Vec<Su2Row>,
}

#[derive(Debug, Deserialize)]
struct Su2Row {
    label: String,
    cells: Vec<ClosedForm>,
}

/// The value pair (a ± b√r) / den; a single value when b = 0.
#[derive(Debug, Deserialize)]
struct ClosedForm {
    a: f64,
    b: f64,
    r: f64,
    den: f64,
}

impl ClosedForm {
    fn values(&self) -> Vec<f64> {
        if self.b == 0.0 {
            vec![self.a / self.den]
        } else {
            let root = self.b * self.r.sqrt();
            vec![(self.a - root) / self.den, (self.a + root) / self.den]
        }
    }
}

fn reference() -> ReferenceTables {
    serde_json::from_str(REFERENCE_JSON).expect("embedded reference data parses")
}

pub struct TableReport {
    pub text: String,
}

/// Depth used for the anharmonic benchmark run.
const TAB_ANHARMONIC_DEPTH: usize = 24;
/// Depth used for the bistable benchmark grid; the strongly squeezed
/// column converges slowest and needs about 35 sites.
const TAB_BISTABLE_DEPTH: usize = 40;

pub fn table_anharmonic() -> TableReport {
    let reference = reference().anharmonic;
    let h = anharmonic_hamiltonian(&AnharmonicParams {
        alpha: reference.alpha,
    });
    let result =
        solve_expression(&h, &AimOptions::with_depth(TAB_ANHARMONIC_DEPTH)).expect("solve");
    let mut text = format!(
        "anharmonic oscillator benchmark (alpha = {})\n n  computed         reference     deviation\n",
        reference.alpha
    );
    let mut max_dev = 0.0_f64;
    for (n, reference_value) in reference.levels.iter().enumerate() {
        let computed = result.roots.get(n).map(|r| r.value).unwrap_or(f64::NAN);
        let dev = (computed - reference_value).abs();
        max_dev = max_dev.max(dev);
        text.push_str(&format!(
            "{n:2}  {:<15}  {:<12}  {dev:.3e}\n",
            sig10(computed),
            reference_value
        ));
    }
    text.push_str(&format!("max deviation from reference: {max_dev:.3e}\n"));
    TableReport { text }
}

pub fn table_bistable() -> TableReport {
    let reference = reference().bistable;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for column in &reference.columns {
        let h = bistable_hamiltonian(&BistableParams {
            omega: reference.omega,
            kappa: column.kappa,
            omega_nl: column.omega_nl,
        });
        let result =
            solve_expression(&h, &AimOptions::with_depth(TAB_BISTABLE_DEPTH)).expect("solve");
        columns.push(result.values());
    }
    let mut text = format!("bistable medium benchmark (omega = {})\n", reference.omega);
    text.push_str(" n");
    for column in &reference.columns {
        text.push_str(&format!("  {:<22}", column.label));
    }
    text.push('\n');
    let mut max_dev = 0.0_f64;
    for n in 0..6 {
        text.push_str(&format!("{n:2}"));
        for (c, column) in reference.columns.iter().enumerate() {
            let computed = columns[c].get(n).copied().unwrap_or(f64::NAN);
            let dev = (computed - column.levels[n]).abs() / column.levels[n].abs().max(1.0);
            max_dev = max_dev.max(dev);
            text.push_str(&format!("  {:<22}", sig10(computed)));
        }
        text.push('\n');
    }
    text.push_str(&format!(
        "max relative deviation from reference: {max_dev:.3e}\n"
    ));
    TableReport { text }
}

pub fn table_su2() -> TableReport {
    let reference = reference().su2;
    let mut spectra: Vec<Vec<f64>> = Vec::new();
    for &kappa in &reference.kappas {
        let model = Su2Model::new(
            HalfInt::from_int(reference.j),
            reference.s,
            reference.omega,
            kappa,
        )
        .expect("reference model is valid");
        let options = AimOptions {
            root_interval: (-100.0, 100.0),
            ..AimOptions::default()
        };
        let result = solve_su2(&model, &options).expect("solve");
        spectra.push(result.values());
    }
    let mut text = format!(
        "su(2) chain benchmark (omega = {}, s = {}, j = {})\n m ",
        reference.omega, reference.s, reference.j
    );
    for &kappa in &reference.kappas {
        text.push_str(&format!("  kappa={kappa:<18}"));
    }
    text.push('\n');
    let mut max_dev = 0.0_f64;
    for row in &reference.rows {
        text.push_str(&format!("{:3}", row.label));
        for (c, cell) in row.cells.iter().enumerate() {
            let mut rendered = Vec::new();
            for expected in cell.values() {
                // the computed spectrum is sorted; match by nearness
                let computed = spectra[c]
                    .iter()
                    .copied()
                    .min_by(|x, y| {
                        (x - expected).abs().total_cmp(&(y - expected).abs())
                    })
                    .unwrap_or(f64::NAN);
                max_dev = max_dev.max((computed - expected).abs());
                rendered.push(sig10(computed));
            }
            text.push_str(&format!("  {:<24}", rendered.join(", ")));
        }
        text.push('\n');
    }
    text.push_str(&format!(
        "max deviation from closed forms: {max_dev:.3e}\n"
    ));
    TableReport { text }
}
