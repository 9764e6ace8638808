//! Parse a GeoLife .plt trajectory, quantize it and count points per cell.

use std::collections::BTreeMap;

use espat::ingest::parse_geolife;
use espat::spatial::GridConfig;

const SAMPLE: &str = "Geolife trajectory
WGS 84
Altitude is in Feet
Reserved 3
0,2,255,My Track,0,0,2,8421376
0
39.984702,116.318417,0,492,39744.1201851852,2008-10-23,02:53:04
39.984683,116.31845,0,492,39744.1202546296,2008-10-23,02:53:10
39.984686,116.318417,0,-777,39744.1203125,2008-10-23,02:53:15
39.984688,116.318385,0,492,39744.1203703704,2008-10-23,02:53:20
40.010000,116.320000,0,800,39744.1204282407,2008-10-23,02:53:25
not,a,valid,row
";

fn main() {
    let out = parse_geolife(SAMPLE.as_bytes(), "user000").unwrap();
    println!("{} records, {} issues", out.records.len(), out.issues.len());
    for issue in &out.issues {
        println!("  line {}: {}", issue.line, issue.message);
    }
    let grid = GridConfig::new([39.9, 116.2, 0.0], [40.1, 116.4, 500.0], 5).unwrap();
    let mut cells = BTreeMap::new();
    for p in out.points() {
        match grid.quantize(&p) {
            Ok(c) => *cells.entry(c.as_array()).or_insert(0) += 1,
            Err(e) => println!("  skipped: {e}"),
        }
    }
    for (cell, n) in cells {
        println!("cell {cell:?}: {n}");
    }
}
