//! Problems bundled with the binary.

pub const PROBLEMS: &[(&str, &str)] = &[
    ("a4_klein_trivial", include_str!("../corpus/a4_klein_trivial.json")),
    ("d4_center_sign", include_str!("../corpus/d4_center_sign.json")),
    ("d4_rotation_conjugate_pair", include_str!("../corpus/d4_rotation_conjugate_pair.json")),
    ("d4_rotation_sign", include_str!("../corpus/d4_rotation_sign.json")),
    ("heisenberg27_center", include_str!("../corpus/heisenberg27_center.json")),
    ("pauli_center", include_str!("../corpus/pauli_center.json")),
    ("q8_center_mixed", include_str!("../corpus/q8_center_mixed.json")),
    ("q8_center_sign", include_str!("../corpus/q8_center_sign.json")),
    ("q8_center_sign_2dim", include_str!("../corpus/q8_center_sign_2dim.json")),
    ("q8_center_sign_3dim", include_str!("../corpus/q8_center_sign_3dim.json")),
    ("s3_rotation_character", include_str!("../corpus/s3_rotation_character.json")),
    ("z4_over_z2", include_str!("../corpus/z4_over_z2.json")),
    ("z8_over_z4", include_str!("../corpus/z8_over_z4.json")),
];
