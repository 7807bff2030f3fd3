//! Tables compiled into the library.

pub const INDEX: &str = include_str!("../../../data/tables/index.json");

pub const TABLES: &[(&str, &str)] = &[
    ("length24_z8.json", include_str!("../../../data/tables/length24_z8.json")),
    ("length24_fournega.json", include_str!("../../../data/tables/length24_fournega.json")),
    ("length24_transforms_k5_9.json", include_str!("../../../data/tables/length24_transforms_k5_9.json")),
    ("length24_transforms_k10_15.json", include_str!("../../../data/tables/length24_transforms_k10_15.json")),
    ("length24_transforms_k16_20.json", include_str!("../../../data/tables/length24_transforms_k16_20.json")),
    ("length32_fournega.json", include_str!("../../../data/tables/length32_fournega.json")),
    ("length32_transforms.json", include_str!("../../../data/tables/length32_transforms.json")),
    ("length64_z4.json", include_str!("../../../data/tables/length64_z4.json")),
    ("length56_z4.json", include_str!("../../../data/tables/length56_z4.json")),
];
