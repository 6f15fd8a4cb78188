"""Chebyshev tables for the large-argument J0/J1 branch.

Generated by tools/gen_bessel_coeffs.py; do not edit by hand.
"""

XSPLIT = 7.4

P0_CHEB = (
    0.99937107548175581423,
    -0.00062470878896983967517,
    4.1333799736977351004e-6,
    -7.9357934178968071451e-8,
    2.8266751588827375626e-9,
    -1.5243954042317081099e-10,
    1.1105548874561075577e-11,
    -1.0176993532134481589e-12,
    1.1182647031603768505e-13,
    -1.4244397851665438605e-14,
    2.0519047930566282719e-15,
    -3.2805236708517160791e-16,
    5.7369929574095396034e-17,
    -1.0848553382637475265e-17,
    2.1976662861273584092e-18,
    -4.7330112885239334885e-19,
    1.0768172402045337923e-19,
)

Q0_CHEB = (
    -0.99485530823773635093,
    0.0050795103481526703452,
    -0.000063349210614992289477,
    1.7470012358974226189e-6,
    -7.9570031282571233901e-8,
    5.1487729325541225911e-9,
    -4.3264260644033909851e-10,
    4.4532550858514755475e-11,
    -5.3938346435359647009e-12,
    7.4686097870430869844e-13,
    -1.1570781694402026099e-13,
    1.9729460537426556929e-14,
    -3.6550480828678599357e-15,
    7.2814292988610616322e-16,
    -1.5468339065769795076e-16,
    3.4799195076329979002e-17,
    -8.2429331543849689253e-18,
    2.0457789245768935216e-18,
    -5.2977042029422526778e-19,
    1.4262895545791629105e-19,
)

P1_CHEB = (
    1.001053099093484602,
    0.001047634718073418909,
    -5.3659854652158329859e-6,
    9.4955059169220291066e-8,
    -3.2501549363576080179e-9,
    1.7119988630465843399e-10,
    -1.2279804600673118133e-11,
    1.1129195340764802732e-12,
    -1.2127778050521633345e-13,
    1.5348421622723056251e-14,
    -2.1994225173876644638e-15,
    3.5012518772132297963e-16,
    -6.1008433534013252694e-17,
    1.150086885815961716e-17,
    -2.3235548811115613786e-18,
    4.9923453695356809965e-19,
    -1.1334488359312440756e-19,
)

Q1_CHEB = (
    2.992762281720826829,
    -0.0071574081211294075808,
    0.000078173460236186705039,
    -2.0402578621674513349e-6,
    9.018293842593027407e-8,
    -5.7267630908095420587e-9,
    4.7503226928272542197e-10,
    -4.8435930727475880601e-11,
    5.8243264240447127102e-12,
    -8.0185633619882691297e-13,
    1.236486024824950307e-13,
    -2.1001498958695671407e-14,
    3.8778717364108666977e-15,
    -7.7033855729981987187e-16,
    1.632418563275019204e-16,
    -3.66444047663430368e-17,
    8.6631479897717408275e-18,
    -2.1463242998338554434e-18,
    5.5493284568842435259e-19,
    -1.4918973282154629205e-19,
)

