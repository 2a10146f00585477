// Generated by gen_oracle_constants.py -- do not edit by hand.
// Reference values computed with independent high-precision oracles
// (mpmath spherical law of cosines, scipy.stats, mpmath.betainc).
#pragma once

#include <vector>

namespace oracle {

struct CityPairCase {
  const char* name;
  double lat1, lon1, lat2, lon2;
  double km;
};

inline const std::vector<CityPairCase> city_pairs = {
    {"new_york-los_angeles", 40.7128, -74.006, 34.0522, -118.2437, 3935.7462546097227},
    {"london-paris", 51.5074, -0.1278, 48.8566, 2.3522, 343.556060341042},
    {"tokyo-sydney", 35.6762, 139.6503, -33.8688, 151.2093, 7825.818616516157},
    {"moscow-beijing", 55.7558, 37.6173, 39.9042, 116.4074, 5793.800327997792},
    {"cairo-cape_town", 30.0444, 31.2357, -33.9249, 18.4241, 7239.246944585569},
    {"rio-lisbon", -22.9068, -43.1729, 38.7223, -9.1393, 7715.321839348513},
    {"singapore-dubai", 1.3521, 103.8198, 25.2048, 55.2708, 5837.1425261514105},
    {"reykjavik-helsinki", 64.1466, -21.9426, 60.1699, 24.9384, 2416.2040521892463},
    {"mexico_city-toronto", 19.4326, -99.1332, 43.6532, -79.3832, 3261.043855773245},
    {"mumbai-nairobi", 19.076, 72.8777, -1.2921, 36.8219, 4541.7216274254415},
    {"seoul-jakarta", 37.5665, 126.978, -6.2088, 106.8456, 5296.24792034305},
    {"berlin-rome", 52.52, 13.405, 41.9028, 12.4964, 1182.54619613387},
    {"buenos_aires-santiago", -34.6037, -58.3816, -33.4489, -70.6693, 1138.922850809492},
    {"anchorage-honolulu", 61.2181, -149.9003, 21.3069, -157.8583, 4480.646836314745},
    {"oslo-athens", 59.9139, 10.7522, 37.9838, 23.7275, 2605.215972845357},
    {"wellington-perth", -41.2866, 174.7756, -31.9505, 115.8605, 5257.785004177877},
    {"denver-chicago", 39.7392, -104.9903, 41.8781, -87.6298, 1477.7039354229864},
    {"lagos-accra", 6.5244, 3.3792, 5.6037, -0.187, 407.3927387213547},
    {"vancouver-montreal", 49.2827, -123.1207, 45.5017, -73.5673, 3686.3204266268503},
    {"madrid-casablanca", 40.4168, -3.7038, 33.5731, -7.5898, 835.3461849675127},
};

struct IBetaCase {
  double a, b, x, value;
};

inline const std::vector<IBetaCase> ibeta_cases = {
    {3.0, 5.0, 0.3, 0.3529305},
    {0.5, 0.5, 0.25, 0.3333333333333333},
    {2.5, 7.5, 0.1, 0.1150872670905074},
    {10.0, 0.3, 0.9, 0.08220956542048964},
    {1.0, 1.0, 0.42, 0.42},
    {6.0, 2.0, 0.75, 0.4449462890625},
    {0.8, 4.2, 0.05, 0.28164538605816875},
    {12.5, 12.5, 0.5, 0.5},
};

struct TTestCase {
  std::vector<double> xs, ys;
  double t, p;
};

inline const std::vector<TTestCase> ttest_cases = {
    {{2.1, 2.5, 2.3, 2.7}, {1.1, 1.5, 1.3}, 6.086116686897368, 0.0017319158095083905},
    {{-1.741917, -0.736044, -0.918621, -2.784254}, {-0.376816, -1.705496, 0.200996, -2.087099, -0.442493, -2.815396}, -0.4848515482998359, 0.6407787149972568},
    {{0.395102, 1.332035, 0.738022, 0.778742, 1.040012, -0.41673, 0.72805, 1.233165, 0.438747, -0.239568, 0.278164, 0.75524}, {-0.844062, 3.075089, 0.056424, -1.872446, -0.911046, -0.254178, 0.238621, -0.396532, -0.161636}, 1.65639292452662, 0.11406430728063002},
    {{2.78736, 2.476017, 0.733436, -0.603548}, {-1.727023, -1.249981, -0.757619, -1.032309, -2.326754, -0.344253, 0.612267, 2.958879}, 1.8371308350037179, 0.09604869360630276},
    {{0.539264, 1.007261, 1.131684, 0.704967}, {1.396792, -1.490598, 0.166039, -2.449742, -0.073982, 0.891429, -0.172605, 1.551449, -0.554486, 0.351305, 1.695523}, 1.0943834347697714, 0.2936499062383464},
    {{0.093936, 1.161349, -0.752419, 0.304989, -3.246833, -0.922064, 1.529649, -2.28946}, {-0.84591, -0.279063, -3.91177, -0.38945}, 0.8247975236051801, 0.4287221666894022},
    {{-0.37985, 1.158841, 2.239991, 1.544995, 2.1546, -0.017277, 0.063994, 0.705916, 1.269322, -0.000667, 1.70173, 0.822489}, {-2.310124, 0.913973, -4.136126, 1.967001, 1.096286, 0.316809, -1.605075, -0.844282, 0.365417}, 2.244494079135248, 0.03690394300481173},
    {{3.309031, 0.892918, 1.793333, -2.114347, -0.639913, 0.028577, 4.872221, 2.030911, 1.474729, -1.602394, -0.226739, 1.773724}, {0.777165, 0.587154, 2.203724, 2.116209}, -0.4317617126229098, 0.6724898298873413},
    {{0.716228, -0.09059, 0.388327, 0.860295, 0.861052, -0.587041, 1.462095, 1.148578, 0.773401, 0.612506, 0.125935}, {-0.745692, -1.514246, -2.04173, -0.867678, -0.718323, -1.802796, -0.189114, -1.487237, -0.274786, -2.363899, 0.188468, -0.955111}, 5.62618461676455, 1.3888217386255249e-05},
    {{2.063157, -0.519571, 1.909775, 0.097872}, {-3.571861, 0.499374, -1.595274, 0.279018, -0.001511}, 1.6988938919261924, 0.13314279932109488},
};

struct AnovaCase {
  std::vector<std::vector<double>> groups;
  double f, p;
};

inline const std::vector<AnovaCase> anova_cases = {
    {{{-2.911031, -1.65705, -2.616075, -2.089017, -2.351733, -1.964485, -2.330962, -2.333252}, {-3.154158, -2.226796, -1.993704, -3.439114, -1.16011, -0.650645, -2.034491, -1.923103, -2.095102, -1.094461}, {2.763778, 2.427197, 2.041435, 1.571166, 1.984499, 4.585849, 3.717218, 3.024145, 3.616775}, {-2.21514, -1.998026, -1.926785, -2.014995, -1.767442, -2.237492, -1.371162, -2.608671}}, 103.25109467017937, 3.1753544638403635e-16},
    {{{1.095186, 0.439358, 0.729351, 0.386023, -0.881515}, {-2.867081, -2.680312, -2.751932, -2.830303, -2.855277, -2.011614, -2.871902, -2.391818}}, 106.51992121471469, 5.387407348920398e-07},
    {{{-3.425313, 0.842477, 1.843182, 0.075525, 1.313067, 0.852289, -1.305624}, {2.036482, -2.928739, -0.583674, -2.752376, -3.373878, -2.483751, -0.401869, -0.295197}}, 2.0925190307505117, 0.17170031252725662},
    {{{2.316301, 3.156084, 3.075249, 2.03048, 2.317637, 0.445487, 3.764557, 2.5859, 2.043218}, {1.652723, 3.111147, 1.515308, 0.139927, 2.787292, 1.8622, 1.495813, 3.053218, 1.628072, 3.398635}, {-1.448903, -1.84033, -2.483266, -1.470517, -2.489533}}, 42.53103590166227, 4.120230174533421e-08},
    {{{3.363332, 3.143738, 5.026199, 1.151122, 2.987302, 1.662211}, {-3.716342, -2.431982, -3.300585, -2.047408, -3.182237}, {-4.342702, -4.538942, -3.636609, -2.100571, -2.102048, -1.110927, -3.53766}, {0.433864, 0.883664, -0.614375, 0.912516, 0.624807, -0.278533, 0.584358}}, 44.66746167390137, 2.7173934187679726e-09},
    {{{-1.057285, -1.273024, -1.693733, -0.494349, -0.890906}, {-0.163541, -1.996414, -2.933247, -1.776593, -0.921631, -1.615922, -1.255868}, {-0.185156, -0.571794, 0.180058, -1.050282, 0.241273, -0.748001, -0.786947}, {0.313548, -0.911736, 0.735011, -0.290328, -0.854422}}, 5.097964977181877, 0.008787049218647341},
    {{{0.428025, -0.590925, 0.469381, 1.898294, -1.77851}, {0.631623, 0.75267, -1.974823, -1.312258, 0.337581, -2.023225, -3.384784}, {-2.606357, -4.071427, -0.860818, 0.416311, -1.103745, -3.163262, -5.293504, -1.397122, -3.473228}}, 3.8790453684561452, 0.039740152312704655},
    {{{-3.394984, -1.960087, -4.258973, -0.030471, -1.720752, -4.157564, -4.387236, -1.08401, -2.054559, -4.685098}, {-0.789757, -0.014366, -0.804113, -2.858131, 1.134633, -0.299945}, {1.006916, 0.585172, -0.277112, -1.573025, -0.874496, -0.342666, -0.854719}}, 8.295979915589145, 0.0023792673858163246},
    {{{-1.732667, -1.406048, -0.039721, -2.893947, -3.350358, -3.609125, -1.584745}, {-1.952708, -2.358938, -2.510177, -1.727813, -2.311123}}, 0.0205889604445943, 0.8887546241163876},
    {{{-0.972091, 0.400268, -1.107011, -1.514735, -0.098716}, {1.47991, 2.476177, 1.471807, 1.851294, 1.525794, 1.139514, 2.772588, 1.616921, 0.3419, 3.120935}, {1.525614, 2.817366, 1.62477, 1.799104, 1.819108, 2.326219, 2.353066, 1.60409, 1.988835}, {1.122064, 4.368676, 3.661999, 3.260548, 2.67401, 1.500053, 2.528658, 3.187611, 2.143478, 1.556813}}, 18.604370178951047, 5.22821874710178e-07},
};

struct OneSampleTCase {
  std::vector<double> xs;
  double mu0, t, p;
};

inline const std::vector<OneSampleTCase> onesample_cases = {
    {{5.211777, 6.849763, 3.640435, 5.019254, 5.346252, 6.272284, 5.331325, 5.112803, 5.381141, 4.378971}, 4.2, 3.764620485941937, 0.00445319597366197},
    {{3.456894, 2.451917, 2.531293, 3.022911, 2.874752, 3.148773, 2.311619, 3.480478, 2.186261, 2.932486}, 3.0, -1.1083176708863984, 0.29646266680380734},
    {{-0.944176, -3.424637, 2.774796, 1.782411, -0.3372, 2.399197}, 1.5, -1.153715692464743, 0.30076640931284926},
    {{-1.709629, 1.443576, -1.203256, -0.414922, 1.738807, -0.907179, -0.536654, 1.647943, -0.656405, 0.536552, -0.037749, -0.308444}, 0.1, -0.4072675290696928, 0.6916246829582313},
    {{7.946884, 8.165248, 8.087935, 8.080872, 7.891298, 8.186373, 7.873537, 7.708484, 8.061402, 8.325117}, 2.0, 106.14882884071622, 2.9663023604967126e-15},
};

}  // namespace oracle
