use birat::instance::Instance;
use birat::sequence::{cross_validate, run_orbit};

// n, d, then the chart columns in instance order
const DP1_TABLE: [[u32; 6]; 11] = [
    [0, 1, 0, 0, 0, 0],
    [1, 2, 0, 0, 2, 2],
    [2, 4, 0, 2, 6, 4],
    [3, 8, 2, 6, 12, 8],
    [4, 14, 6, 12, 20, 14],
    [5, 22, 12, 20, 30, 22],
    [6, 32, 20, 30, 42, 32],
    [7, 44, 30, 42, 56, 44],
    [8, 58, 42, 56, 72, 58],
    [9, 74, 56, 72, 90, 74],
    [10, 92, 72, 90, 110, 92],
];

const QRT_TABLE: [[u32; 6]; 11] = [
    [0, 1, 0, 0, 0, 0],
    [1, 2, 0, 0, 2, 1],
    [2, 4, 0, 2, 5, 3],
    [3, 8, 2, 5, 11, 7],
    [4, 14, 5, 11, 19, 13],
    [5, 23, 11, 19, 31, 22],
    [6, 35, 19, 31, 46, 34],
    [7, 51, 31, 46, 66, 50],
    [8, 71, 46, 66, 90, 70],
    [9, 96, 66, 90, 120, 95],
    [10, 126, 90, 120, 155, 125],
];

fn check(key: &str, table: &[[u32; 6]; 11]) {
    let inst = Instance::builtin(key).unwrap();
    let t = run_orbit(&inst.map, &inst.seed, &inst.charts, 5, None).unwrap();
    assert!(t.is_complete());
    for (row, want) in t.rows.iter().zip(table) {
        let mut got = vec![row.n as u32, row.degree];
        got.extend(&row.indices);
        assert_eq!(got, want.to_vec(), "{key} row {}", row.n);
    }
    assert_eq!(t.degree_law_violation(&inst.map), None);
    let sys = inst.affine.as_ref().unwrap();
    let rep = cross_validate(&t, sys, 10, inst.alpha_chart.as_deref()).unwrap();
    assert!(rep.agree(), "{key}: {:?} {:?}", rep.mismatches, rep.step_failures);
    for (n, want) in table.iter().enumerate() {
        let got: Vec<String> = rep.affine[n].iter().map(|x| x.to_string()).collect();
        let want: Vec<String> = want[1..].iter().map(|x| x.to_string()).collect();
        assert_eq!(got, want, "{key} affine row {n}");
    }
}

#[test]
fn dp1_table() {
    check("dp1-ercolani", &DP1_TABLE);
}

#[test]
fn qrt_table() {
    check("inflated-qrt", &QRT_TABLE);
}
