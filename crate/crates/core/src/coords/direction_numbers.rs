// Joe-Kuo direction numbers (new-joe-kuo-6.21201), dimensions 2 through 100.
// Dimension 1 is the van der Corput sequence and has no entry.

pub(crate) struct Primitive {
    pub degree: u32,
    pub coeffs: u32,
    pub initial: &'static [u32],
}

pub(crate) const PRIMITIVES: [Primitive; 99] = [
    Primitive { degree: 1, coeffs: 0, initial: &[1] },
    Primitive { degree: 2, coeffs: 1, initial: &[1, 3] },
    Primitive { degree: 3, coeffs: 1, initial: &[1, 3, 1] },
    Primitive { degree: 3, coeffs: 2, initial: &[1, 1, 1] },
    Primitive { degree: 4, coeffs: 1, initial: &[1, 1, 3, 3] },
    Primitive { degree: 4, coeffs: 4, initial: &[1, 3, 5, 13] },
    Primitive { degree: 5, coeffs: 2, initial: &[1, 1, 5, 5, 17] },
    Primitive { degree: 5, coeffs: 4, initial: &[1, 1, 5, 5, 5] },
    Primitive { degree: 5, coeffs: 7, initial: &[1, 1, 7, 11, 19] },
    Primitive { degree: 5, coeffs: 11, initial: &[1, 1, 5, 1, 1] },
    Primitive { degree: 5, coeffs: 13, initial: &[1, 1, 1, 3, 11] },
    Primitive { degree: 5, coeffs: 14, initial: &[1, 3, 5, 5, 31] },
    Primitive { degree: 6, coeffs: 1, initial: &[1, 3, 3, 9, 7, 49] },
    Primitive { degree: 6, coeffs: 13, initial: &[1, 1, 1, 15, 21, 21] },
    Primitive { degree: 6, coeffs: 16, initial: &[1, 3, 1, 13, 27, 49] },
    Primitive { degree: 6, coeffs: 19, initial: &[1, 1, 1, 15, 7, 5] },
    Primitive { degree: 6, coeffs: 22, initial: &[1, 3, 1, 15, 13, 25] },
    Primitive { degree: 6, coeffs: 25, initial: &[1, 1, 5, 5, 19, 61] },
    Primitive { degree: 7, coeffs: 1, initial: &[1, 3, 7, 11, 23, 15, 103] },
    Primitive { degree: 7, coeffs: 4, initial: &[1, 3, 7, 13, 13, 15, 69] },
    Primitive { degree: 7, coeffs: 7, initial: &[1, 1, 3, 13, 7, 35, 63] },
    Primitive { degree: 7, coeffs: 8, initial: &[1, 3, 5, 9, 1, 25, 53] },
    Primitive { degree: 7, coeffs: 14, initial: &[1, 3, 1, 13, 9, 35, 107] },
    Primitive { degree: 7, coeffs: 19, initial: &[1, 3, 1, 5, 27, 61, 31] },
    Primitive { degree: 7, coeffs: 21, initial: &[1, 1, 5, 11, 19, 41, 61] },
    Primitive { degree: 7, coeffs: 28, initial: &[1, 3, 5, 3, 3, 13, 69] },
    Primitive { degree: 7, coeffs: 31, initial: &[1, 1, 7, 13, 1, 19, 1] },
    Primitive { degree: 7, coeffs: 32, initial: &[1, 3, 7, 5, 13, 19, 59] },
    Primitive { degree: 7, coeffs: 37, initial: &[1, 1, 3, 9, 25, 29, 41] },
    Primitive { degree: 7, coeffs: 41, initial: &[1, 3, 5, 13, 23, 1, 55] },
    Primitive { degree: 7, coeffs: 42, initial: &[1, 3, 7, 3, 13, 59, 17] },
    Primitive { degree: 7, coeffs: 50, initial: &[1, 3, 1, 3, 5, 53, 69] },
    Primitive { degree: 7, coeffs: 55, initial: &[1, 1, 5, 5, 23, 33, 13] },
    Primitive { degree: 7, coeffs: 56, initial: &[1, 1, 7, 7, 1, 61, 123] },
    Primitive { degree: 7, coeffs: 59, initial: &[1, 1, 7, 9, 13, 61, 49] },
    Primitive { degree: 7, coeffs: 62, initial: &[1, 3, 3, 5, 3, 55, 33] },
    Primitive { degree: 8, coeffs: 14, initial: &[1, 3, 1, 15, 31, 13, 49, 245] },
    Primitive { degree: 8, coeffs: 21, initial: &[1, 3, 5, 15, 31, 59, 63, 97] },
    Primitive { degree: 8, coeffs: 22, initial: &[1, 3, 1, 11, 11, 11, 77, 249] },
    Primitive { degree: 8, coeffs: 38, initial: &[1, 3, 1, 11, 27, 43, 71, 9] },
    Primitive { degree: 8, coeffs: 47, initial: &[1, 1, 7, 15, 21, 11, 81, 45] },
    Primitive { degree: 8, coeffs: 49, initial: &[1, 3, 7, 3, 25, 31, 65, 79] },
    Primitive { degree: 8, coeffs: 50, initial: &[1, 3, 1, 1, 19, 11, 3, 205] },
    Primitive { degree: 8, coeffs: 52, initial: &[1, 1, 5, 9, 19, 21, 29, 157] },
    Primitive { degree: 8, coeffs: 56, initial: &[1, 3, 7, 11, 1, 33, 89, 185] },
    Primitive { degree: 8, coeffs: 67, initial: &[1, 3, 3, 3, 15, 9, 79, 71] },
    Primitive { degree: 8, coeffs: 70, initial: &[1, 3, 7, 11, 15, 39, 119, 27] },
    Primitive { degree: 8, coeffs: 84, initial: &[1, 1, 3, 1, 11, 31, 97, 225] },
    Primitive { degree: 8, coeffs: 97, initial: &[1, 1, 1, 3, 23, 43, 57, 177] },
    Primitive { degree: 8, coeffs: 103, initial: &[1, 3, 7, 7, 17, 17, 37, 71] },
    Primitive { degree: 8, coeffs: 115, initial: &[1, 3, 1, 5, 27, 63, 123, 213] },
    Primitive { degree: 8, coeffs: 122, initial: &[1, 1, 3, 5, 11, 43, 53, 133] },
    Primitive { degree: 9, coeffs: 8, initial: &[1, 3, 5, 5, 29, 17, 47, 173, 479] },
    Primitive { degree: 9, coeffs: 13, initial: &[1, 3, 3, 11, 3, 1, 109, 9, 69] },
    Primitive { degree: 9, coeffs: 16, initial: &[1, 1, 1, 5, 17, 39, 23, 5, 343] },
    Primitive { degree: 9, coeffs: 22, initial: &[1, 3, 1, 5, 25, 15, 31, 103, 499] },
    Primitive { degree: 9, coeffs: 25, initial: &[1, 1, 1, 11, 11, 17, 63, 105, 183] },
    Primitive { degree: 9, coeffs: 44, initial: &[1, 1, 5, 11, 9, 29, 97, 231, 363] },
    Primitive { degree: 9, coeffs: 47, initial: &[1, 1, 5, 15, 19, 45, 41, 7, 383] },
    Primitive { degree: 9, coeffs: 52, initial: &[1, 3, 7, 7, 31, 19, 83, 137, 221] },
    Primitive { degree: 9, coeffs: 55, initial: &[1, 1, 1, 3, 23, 15, 111, 223, 83] },
    Primitive { degree: 9, coeffs: 59, initial: &[1, 1, 5, 13, 31, 15, 55, 25, 161] },
    Primitive { degree: 9, coeffs: 62, initial: &[1, 1, 3, 13, 25, 47, 39, 87, 257] },
    Primitive { degree: 9, coeffs: 67, initial: &[1, 1, 1, 11, 21, 53, 125, 249, 293] },
    Primitive { degree: 9, coeffs: 74, initial: &[1, 1, 7, 11, 11, 7, 57, 79, 323] },
    Primitive { degree: 9, coeffs: 81, initial: &[1, 1, 5, 5, 17, 13, 81, 3, 131] },
    Primitive { degree: 9, coeffs: 82, initial: &[1, 1, 7, 13, 23, 7, 65, 251, 475] },
    Primitive { degree: 9, coeffs: 87, initial: &[1, 3, 5, 1, 9, 43, 3, 149, 11] },
    Primitive { degree: 9, coeffs: 91, initial: &[1, 1, 3, 13, 31, 13, 13, 255, 487] },
    Primitive { degree: 9, coeffs: 94, initial: &[1, 3, 3, 1, 5, 63, 89, 91, 127] },
    Primitive { degree: 9, coeffs: 103, initial: &[1, 1, 3, 3, 1, 19, 123, 127, 237] },
    Primitive { degree: 9, coeffs: 104, initial: &[1, 1, 5, 7, 23, 31, 37, 243, 289] },
    Primitive { degree: 9, coeffs: 109, initial: &[1, 1, 5, 11, 17, 53, 117, 183, 491] },
    Primitive { degree: 9, coeffs: 122, initial: &[1, 1, 1, 5, 1, 13, 13, 209, 345] },
    Primitive { degree: 9, coeffs: 124, initial: &[1, 1, 3, 15, 1, 57, 115, 7, 33] },
    Primitive { degree: 9, coeffs: 137, initial: &[1, 3, 1, 11, 7, 43, 81, 207, 175] },
    Primitive { degree: 9, coeffs: 138, initial: &[1, 3, 1, 1, 15, 27, 63, 255, 49] },
    Primitive { degree: 9, coeffs: 143, initial: &[1, 3, 5, 3, 27, 61, 105, 171, 305] },
    Primitive { degree: 9, coeffs: 145, initial: &[1, 1, 5, 3, 1, 3, 57, 249, 149] },
    Primitive { degree: 9, coeffs: 152, initial: &[1, 1, 3, 5, 5, 57, 15, 13, 159] },
    Primitive { degree: 9, coeffs: 157, initial: &[1, 1, 1, 11, 7, 11, 105, 141, 225] },
    Primitive { degree: 9, coeffs: 167, initial: &[1, 3, 3, 5, 27, 59, 121, 101, 271] },
    Primitive { degree: 9, coeffs: 173, initial: &[1, 3, 5, 9, 11, 49, 51, 59, 115] },
    Primitive { degree: 9, coeffs: 176, initial: &[1, 1, 7, 1, 23, 45, 125, 71, 419] },
    Primitive { degree: 9, coeffs: 181, initial: &[1, 1, 3, 5, 23, 5, 105, 109, 75] },
    Primitive { degree: 9, coeffs: 182, initial: &[1, 1, 7, 15, 7, 11, 67, 121, 453] },
    Primitive { degree: 9, coeffs: 185, initial: &[1, 3, 7, 3, 9, 13, 31, 27, 449] },
    Primitive { degree: 9, coeffs: 191, initial: &[1, 3, 1, 15, 19, 39, 39, 89, 15] },
    Primitive { degree: 9, coeffs: 194, initial: &[1, 1, 1, 1, 1, 33, 73, 145, 379] },
    Primitive { degree: 9, coeffs: 199, initial: &[1, 3, 1, 15, 15, 43, 29, 13, 483] },
    Primitive { degree: 9, coeffs: 218, initial: &[1, 1, 7, 3, 19, 27, 85, 131, 431] },
    Primitive { degree: 9, coeffs: 220, initial: &[1, 3, 3, 3, 5, 35, 23, 195, 349] },
    Primitive { degree: 9, coeffs: 227, initial: &[1, 3, 3, 7, 9, 27, 39, 59, 297] },
    Primitive { degree: 9, coeffs: 229, initial: &[1, 1, 3, 9, 11, 17, 13, 241, 157] },
    Primitive { degree: 9, coeffs: 230, initial: &[1, 3, 7, 15, 25, 57, 33, 189, 213] },
    Primitive { degree: 9, coeffs: 234, initial: &[1, 1, 7, 1, 9, 55, 73, 83, 217] },
    Primitive { degree: 9, coeffs: 236, initial: &[1, 3, 3, 13, 19, 27, 23, 113, 249] },
    Primitive { degree: 9, coeffs: 241, initial: &[1, 3, 5, 3, 23, 43, 3, 253, 479] },
    Primitive { degree: 9, coeffs: 244, initial: &[1, 1, 5, 5, 11, 5, 45, 117, 217] },
];
