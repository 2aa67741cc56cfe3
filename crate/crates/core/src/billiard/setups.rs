//! Scatterer configurations of the one- and three-disk microwave billiards
//! (radius 800 mm, 60 degree opening). Radii are given as fractions of the
//! sector radius, positions in millimetres.

use super::geometry::DiskScatterer;

const R_MM: f64 = 800.0;

fn disk(x_mm: f64, y_mm: f64, radius_fraction: f64) -> DiskScatterer {
    DiskScatterer::from_mm(x_mm, y_mm, radius_fraction * R_MM)
}

/// One-disk setups, 1st to 4th.
pub fn one_disk() -> [(&'static str, [DiskScatterer; 1]); 4] {
    [
        ("one_disk_1st", [disk(640.0, 80.0, 0.025)]),
        ("one_disk_2nd", [disk(640.0, 80.0, 0.03)]),
        ("one_disk_3rd", [disk(640.0, 400.0, 0.03)]),
        ("one_disk_4th", [disk(640.0, 400.0, 0.025)]),
    ]
}

/// Three-disk setups, 1st to 6th.
pub fn three_disk() -> [(&'static str, [DiskScatterer; 3]); 6] {
    [
        ("three_disk_1st", [disk(640.0, 400.0, 0.02), disk(520.0, 520.0, 0.03), disk(640.0, 80.0, 0.05)]),
        ("three_disk_2nd", [disk(640.0, 400.0, 0.02), disk(520.0, 520.0, 0.04), disk(640.0, 80.0, 0.05)]),
        ("three_disk_3rd", [disk(640.0, 400.0, 0.01), disk(520.0, 520.0, 0.04), disk(640.0, 80.0, 0.05)]),
        ("three_disk_4th", [disk(640.0, 400.0, 0.02), disk(520.0, 520.0, 0.04), disk(520.0, 80.0, 0.05)]),
        ("three_disk_5th", [disk(640.0, 400.0, 0.025), disk(520.0, 520.0, 0.04), disk(520.0, 80.0, 0.05)]),
        ("three_disk_6th", [disk(680.0, 200.0, 0.025), disk(520.0, 520.0, 0.04), disk(520.0, 80.0, 0.05)]),
    ]
}
