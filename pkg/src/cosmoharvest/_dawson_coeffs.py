"""Frozen Chebyshev coefficients for the mid-range Dawson evaluator.

Generated by tools/gen_dawson_coeffs.py from a high-precision
positive-term series; do not edit by hand.
"""

SMALL_CUT = 0.8
ASYM_CUT = 6.5

# per piece: (lo, hi, coefficients of 2x*D(x) in Chebyshev basis)
PIECES = (
    (0.8, 2.4, (
        1.1368840784191017002,
        0.092122452794817778882,
        -0.14555439237748478984,
        0.050382882212553427862,
        -0.0017217497757542277709,
        -0.0034593761752296345636,
        0.00086613091411701951425,
        0.000018880809507312373661,
        -0.000042154234165341822401,
        5.3857454030827521362e-6,
        7.8090905220281620336e-7,
        -2.6373936493704015339e-7,
        6.1045461849349440781e-9,
        6.3812887166398282906e-9,
        -7.4304498477563641976e-10,
        -8.0776718344386385594e-11,
        2.2354238053091732139e-11,
        -9.8346140020979044060e-14,
        -4.1239819260345724087e-13,
        2.9894639437080671196e-14,
        5.0184628900965477392e-15,
    )),
    (2.4, 4.2, (
        1.0668657609742191106,
        -0.045932759397883688969,
        0.012889387055180578544,
        -0.0031800245974161897298,
        0.00061265007929681688129,
        -0.000053938556783448732553,
        -0.000018329107477076375415,
        0.000010459495752533511651,
        -2.7187506274851643257e-6,
        3.7309180529417138912e-7,
        6.9425198406986573542e-9,
        -1.6111490863156618279e-8,
        3.6753071675468552504e-9,
        -3.0734114564132489426e-10,
        -4.5808251947468670530e-11,
        1.7616308577162342178e-11,
        -2.0526015478903692711e-12,
        -7.7133077290682089063e-14,
        6.0518178720864216515e-14,
        -7.9233327094563701080e-15,
    )),
    (4.2, 6.5, (
        1.0200645395477633933,
        -0.0091834914436362467541,
        0.0016291435833098579763,
        -0.00026446147632559130481,
        0.000041514111055321505030,
        -6.4792704165682013545e-6,
        1.0243323604965049850e-6,
        -1.6650955687595408245e-7,
        2.8139941205463740971e-8,
        -4.9540786040725147240e-9,
        8.9544770645918705812e-10,
        -1.6028098545290390598e-10,
        2.6713075435921664762e-11,
        -3.7007875353707476008e-12,
        2.8844151932242659631e-13,
        4.5756639669171623802e-14,
        -2.7587510241571038478e-14,
        7.6073997540069040304e-15,
        -1.4570568982823263834e-15,
    )),
)
