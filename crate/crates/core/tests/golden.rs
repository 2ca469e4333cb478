use imset::{Configuration, GroundSet, Orientation};

const GOLDEN: &str = include_str!("../data/configuration_n4_descending.csv");

#[test]
fn n4_descending_matches_golden_table() {
    let g = GroundSet::new(4).unwrap();
    let csv = Configuration::full(&g).unwrap().to_csv(Orientation::Descending);
    assert_eq!(csv, GOLDEN);
}

#[test]
fn golden_table_shape_and_column_sums() {
    let lines: Vec<&str> = GOLDEN.lines().collect();
    assert_eq!(lines.len(), 17);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header.len(), 25);
    assert_eq!(header[1], "a|b|cd");
    assert_eq!(header[24], "a|b|0");
    assert!(lines[1].starts_with("abcd,"));
    assert!(lines[16].starts_with("0,"));
    let mut sums = [0i64; 24];
    for l in &lines[1..] {
        for (j, x) in l.split(',').skip(1).enumerate() {
            sums[j] += x.parse::<i64>().unwrap();
        }
    }
    assert!(sums.iter().all(|&s| s == 0));
}

#[test]
fn ascending_is_the_reversal() {
    let g = GroundSet::new(4).unwrap();
    let config = Configuration::full(&g).unwrap();
    let parse = |s: String| -> Vec<Vec<String>> {
        s.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
    };
    let asc = parse(config.to_csv(Orientation::Ascending));
    let desc = parse(config.to_csv(Orientation::Descending));
    for (r, row) in asc.iter().enumerate().skip(1) {
        let other = &desc[desc.len() - r];
        assert_eq!(row[0], other[0]);
        for j in 1..row.len() {
            assert_eq!(row[j], other[row.len() - j]);
        }
    }
}
