#pragma once

// Reference values from tests/oracles/oracle.py (mpmath, 40 digits).

namespace oracle {
inline constexpr double e1_1 = 0.21938393439552027368;
inline constexpr double e1_10 = 4.1569689296853242774e-6;
inline constexpr double e1_1em8_plus_log = -0.57721565490153288561;
inline constexpr double e1_2_3i_re = -0.024826207944199362925;
inline constexpr double e1_2_3i_im = 0.020316674911044622667;
inline constexpr double e1_m1_2i_re = -1.0421677081649356844;
inline constexpr double e1_m1_2i_im = 0.55990877234808102565;
inline constexpr double e1_0p3_m5i_re = 0.13995934474720054243;
inline constexpr double e1_0p3_m5i_im = 0.0075916940741473983448;
inline constexpr double dilog_half = 0.5822405264650125059;
inline constexpr double dilog_m2 = -1.4367463668836809464;
inline constexpr double arctanh_sqrt_half = 0.88137358701954302523;
inline constexpr double erfc_1 = 0.15729920705028513066;
inline constexpr double rho_2 = 0.30685281944005469058;
inline constexpr double rho_2p5 = 0.13031956183225074561;
inline constexpr double rho_3 = 0.048608388291131566907;
inline constexpr double rho2_2p5 = 0.95338970629359418921;
inline constexpr double rho_4 = 0.0049109256477608323527;
inline constexpr double rho_5 = 0.00035472470045603972983;
inline constexpr double rho_6 = 0.000019649696353955289652;
inline constexpr double rho_10 = 2.7701718377259589888e-11;
inline constexpr double rho_20 = 2.4617828502887674732e-29;
inline constexpr double sigma_1p5 = 0.27885077089528529038;
inline constexpr double sigma_3 = 0.0047409341303045586383;
inline constexpr double sigma_5p5 = 7.5216517784879984294e-7;
inline constexpr double sigma_10 = 3.9196731606717193551e-15;
inline constexpr double g_theta1p5_0p5 = 0.7071067811865475244;
inline constexpr double g_theta1p5_2p5 = 0.40265321112221322596;
inline constexpr double g_theta1p5_4 = 0.039207020995040853929;
inline constexpr double g_theta0p3_2p5 = 0.0061037734736198841173;
inline constexpr double g_theta0p3_6 = 2.8343389921882719386e-9;
inline constexpr double sigma_tilde_2 = 0.11862641298045697477;
inline constexpr double sigma_2 = 0.083881541046317011007;
inline constexpr double halfnormal_lt_1 = 0.52315658373024674336;
inline constexpr double rho_lt_1 = 0.80301335451485040515;
inline constexpr double hk2_3 = 0.2944413539184825166;
inline constexpr double hk2_4 = 0.81218326699004447603;
inline constexpr double h3_3p5 = 0.079903360639552818506;
inline constexpr double component_0p6 = 0.25450184550259580992;
inline constexpr double joint_1_1p5 = 0.4869787010375245947;
inline constexpr double halfnormal_median = 0.6744897501960817432;
inline constexpr double golomb_dickman = 0.62432998854355087099;
inline constexpr double erfc_gauss_inv_1 = 0.45593812776599623677;
}  // namespace oracle
