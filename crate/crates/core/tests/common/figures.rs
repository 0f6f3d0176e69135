//! Reference diversity and curvature curves for Iris, Wine and the FEI face
//! embeddings, indexed by the number of selected centroids, plus the elbow
//! curve for Wine.

/// `(k, SSE)` for Wine, k = 2..=10.
pub const WINE_SSE: [(usize, f64); 9] = [
    (2, 4543749.614531862),
    (3, 2370689.686782968),
    (4, 1333139.2086165315),
    (5, 916379.187153917),
    (6, 647326.0020260847),
    (7, 412137.50910045847),
    (8, 323223.2470542668),
    (9, 270954.92924153747),
    (10, 217968.7157736366),
];

/// Diversity curve R for Iris.
pub const IRIS_R: [f64; 25] = [
    0.0, 0.0, 0.02215682037950287, 0.03994210543564494, 0.040490962999090115, 0.04435079539276918,
    0.0445684560555513, 0.04571661224777355, 0.04607245730660508, 0.04625433072403102,
    0.04702882456113127, 0.047210913733982035, 0.04751706990766387, 0.04774688760724033,
    0.047794066525014584, 0.04809336483831379, 0.048135741384190335, 0.04824032696293407,
    0.04889114042857632, 0.04904388955822791, 0.049086971637883905, 0.049273176392985805,
    0.05013322005011518, 0.050337218410325325, 0.050463752886221985,
];

/// Diversity curve R for Wine.
pub const WINE_R: [f64; 53] = [
    0.0, 0.0, 7.335095641630045e-05, 0.0038552407554799367, 0.0038711785286078184,
    0.003904997225690766, 0.003938789029473983, 0.003957155310409406, 0.00396045319319544,
    0.003992594310423818, 0.00402085297976933, 0.004056103469037317, 0.004101852337565521,
    0.004211075150896148, 0.004296370089066186, 0.004303907415657373, 0.004325444809906198,
    0.00433978089434897, 0.004397340114760783, 0.004408699390816536, 0.004459216780128128,
    0.004463993469450517, 0.004556502947760087, 0.004587857389086826, 0.004605741139228379,
    0.004697019237358564, 0.004742987218848876, 0.004755217143986037, 0.0048006294348140926,
    0.004881650251070045, 0.004891934541140437, 0.004894382517367673, 0.00495233800590813,
    0.0049818212016465415, 0.0050180946752593, 0.005021674910643052, 0.005066015142387981,
    0.005171663473454696, 0.005195262043130372, 0.005279305707817348, 0.005292422671042886,
    0.005410159373947114, 0.005434325294373017, 0.005491919928633943, 0.0054941005087496865,
    0.005502779272231725, 0.005508458818623053, 0.005522362726266571, 0.005572971854659427,
    0.005581783246624328, 0.00567940158230461, 0.00570341159588797, 0.0057735085310322435,
];

/// Diversity curve R for the FEI face embeddings.
pub const FEI_R: [f64; 219] = [
    0.0, 0.0, 1.27e-06, 0.001783178, 0.003939411, 0.007190639, 0.010646449, 0.011252816, 0.012693156,
    0.013884351, 0.01728448, 0.017846191, 0.020893329, 0.021110227, 0.024473475, 0.024783887,
    0.029124567, 0.031154226, 0.0326839, 0.03297305, 0.03314286, 0.035429924, 0.035945162,
    0.03686513, 0.03749668, 0.03760834, 0.038619946, 0.040295564, 0.041816749, 0.042206276,
    0.043039977, 0.043108639, 0.043392814, 0.043820221, 0.044223371, 0.044648255, 0.04507389,
    0.045076652, 0.045541901, 0.046369377, 0.046380156, 0.046509577, 0.046628645, 0.047076921,
    0.047814636, 0.048062565, 0.049554458, 0.049894345, 0.050598206, 0.051388808, 0.051907388,
    0.05193165, 0.052267123, 0.053004307, 0.053182623, 0.05322607, 0.053374758, 0.053695883,
    0.054483376, 0.05448572, 0.054884794, 0.055612876, 0.056094656, 0.056384963, 0.056837762,
    0.056894655, 0.057105738, 0.057339534, 0.05783115, 0.058181871, 0.058585553, 0.058882734,
    0.059351055, 0.05993731, 0.060409285, 0.060503317, 0.061195339, 0.061438692, 0.06144157,
    0.062821459, 0.063047109, 0.063057108, 0.063227977, 0.063264812, 0.06383008, 0.064247959,
    0.064345362, 0.065103427, 0.065109768, 0.065591768, 0.065677743, 0.065769589, 0.066382277,
    0.066655204, 0.066860083, 0.067695815, 0.067720284, 0.067960243, 0.068548384, 0.068680027,
    0.068822373, 0.068937923, 0.069380982, 0.069709054, 0.070183061, 0.071024529, 0.071250101,
    0.071304456, 0.071320429, 0.072185786, 0.072601606, 0.072745901, 0.073447832, 0.074158467,
    0.074275552, 0.074316484, 0.075373367, 0.075688487, 0.075802071, 0.077000889, 0.077131895,
    0.077625275, 0.077766987, 0.07784692, 0.078219485, 0.078304828, 0.079483917, 0.079671577,
    0.079952535, 0.080033826, 0.080524243, 0.080666158, 0.080929066, 0.081245311, 0.08150062,
    0.081968477, 0.082193038, 0.082648982, 0.082953891, 0.083407735, 0.084334109, 0.08487278,
    0.084981073, 0.085840235, 0.08646293, 0.086709576, 0.08727776, 0.087728888, 0.087734756,
    0.088704191, 0.088832677, 0.08910105, 0.090198668, 0.090289492, 0.09103121, 0.09156522,
    0.092062073, 0.092429086, 0.092640314, 0.093568996, 0.094114189, 0.09450056, 0.09513047,
    0.095475819, 0.095549578, 0.095712742, 0.095937912, 0.097257461, 0.097858431, 0.098178535,
    0.098400222, 0.099028548, 0.099721682, 0.09991583, 0.100684251, 0.100904964, 0.101188874,
    0.101207374, 0.101276244, 0.102915767, 0.103119145, 0.103427218, 0.105550444, 0.10670085,
    0.10708677, 0.107937744, 0.108142688, 0.108193681, 0.109312904, 0.110296534, 0.112007968,
    0.11268857, 0.114770251, 0.115233674, 0.116864645, 0.117653558, 0.121324071, 0.123229318,
    0.126113848, 0.135020577, 0.137976903, 0.147215014, 0.150316915, 0.150895735, 0.15691528,
    0.15829441, 0.163520535, 0.164898703, 0.165929522, 0.166032323, 0.167990949, 0.170501392,
    0.171386465, 0.172464095, 0.173173113, 0.173572412, 0.174989757, 0.177243939, 0.177482242,
];

/// Curvature of IRIS_R.
pub const IRIS_KAPPA: [f64; 25] = [
    0.011078410189751435, 0.00998368833785764, -0.0009550979818677118, -0.008882234215663254,
    -0.0035641364128104346, -0.0007607135326807094, -0.0006433725012832158, -0.00020702441907670266,
    -0.0001369084842871926, 0.00010471609750687582, -0.00011703043684008644,
    -0.00010515227477321691, -5.281217660625334e-05, -4.737415918312644e-05, 1.6169559728347456e-05,
    -4.9878774429695935e-05, 0.00010343104546484962, 0.00016415008254266767,
    -0.00013989192489584362, -0.0001435689380692913, 0.00021260429653949925, 0.0002086887099811047,
    -0.00017892881806338864, -0.00022470061206152317, 2.7941119906847068e-05,
];

/// Curvature of WINE_R.
pub const WINE_KAPPA: [f64; 53] = [
    3.667547820815023e-05, 0.000963810186925366, 0.0009311139643003665, -0.0009513659255547728,
    -0.0009325542669655643, 6.00403625923523e-07, -1.1486584274458633e-05, -4.179771175321385e-06,
    9.683905708547537e-06, 7.017539640171357e-06, 5.149892797785845e-06, 2.286563075507589e-05,
    2.8379598170529348e-05, -1.5534854053978418e-05, -4.13607575314981e-05, -1.4239696512892975e-05,
    1.0705145998476966e-05, 8.261254427978786e-06, -2.5046598673487333e-06, -3.4061044535056103e-06,
    8.852375556003841e-06, 1.7142460189739508e-05, -1.2011993971807552e-05, -3.6755178378010586e-06,
    2.200197193973304e-05, -1.2740985321068292e-05, -1.9900965888543588e-05, 1.705880009287915e-05,
    8.415722539833957e-06, -2.8425210107731424e-05, -7.725410389193245e-06, 1.867660446975652e-05,
    1.3383011420323379e-06, -1.1896243801300052e-05, -4.459050552966352e-06, 2.7533713430073263e-05,
    2.033160823190563e-05, -1.0586582045930935e-05, -8.021568172614856e-06, 5.802857921236141e-06,
    1.1185498782581959e-05, -1.2273277768057196e-05, -2.053185218689607e-05,
    -1.7725302748511398e-05, -1.1354226125323735e-05, 2.1810276090971395e-06, 1.25386815389486e-05,
    9.959266565184228e-06, 1.047917288832725e-05, 1.5551957160410858e-05, -3.0806947122969277e-06,
    4.641380240811691e-06, 2.3043460610617423e-05,
];

/// Curvature of FEI_R.
pub const FEI_KAPPA: [f64; 219] = [
    6.33e-07, 0.000445794, 0.000984219, 0.000906066, 0.000692216, -0.000336315, -0.001165076,
    -0.00035766, 0.000636152, 0.000332574, -0.000245617, -0.00017445, -7.18e-06, 0.000102405,
    0.000267735, 0.000674164, -0.000272935, -0.001137873, -0.000775092, 0.000159513, 0.000585834,
    -0.000255417, -0.000312696, -0.000172999, -0.000107063, 0.000486004, 0.000518383, -0.000194127,
    -0.000493393, -0.000252087, -0.000217598, -4.77e-05, 0.00011943, 2.91e-05, 4.99e-06, -9.99e-05,
    -9.56e-05, 0.000216082, 9.26e-05, -0.000288131, -0.000147442, 0.000106786, 0.000234376,
    0.000104575, 0.000138457, 0.000211534, -0.000174018, -8.43e-05, 6.64e-05, -0.000237905,
    -0.000237362, 0.000132454, 0.000138941, -0.000212723, -0.000180841, 6.20e-05, 0.000229121,
    8.00e-05, -0.0001768, 8.43e-05, 0.000202111, -8.88e-05, -0.000116689, -6.56e-05, -0.000118782,
    -1.62e-05, 0.000114359, 9.94e-05, 7.25e-06, -3.54e-05, 2.77e-06, 8.84e-05, 7.32e-05,
    -0.000122142, -6.80e-05, 9.23e-05, -0.000134956, 0.000111848, 0.000339827, -0.000286779,
    -0.000356168, -6.99e-06, 0.000105309, 0.000193861, -2.17e-05, -3.19e-05, 6.23e-05, -9.18e-05,
    -4.91e-05, -7.76e-05, 3.41e-05, 0.000176948, -5.67e-05, 3.87e-05, 9.56e-05, -0.000194045,
    -8.03e-06, 0.000113839, -0.000138528, -0.000115472, 7.12e-05, 0.000128309, 6.09e-05,
    0.000136086, 6.62e-05, -0.000258887, -0.000249178, 0.000150351, 0.000302712, -8.03e-05,
    -0.000108737, 0.000213113, -4.63e-06, -0.000313637, 6.75e-05, 0.000303496, -0.000167277,
    -1.49e-05, 0.00022528, -0.000172004, -0.000173683, -0.000100685, -4.56e-05, 5.91e-05,
    0.000202983, 0.00022721, -0.000198953, -0.000251125, 2.58e-05, 6.75e-05, -4.17e-05, -1.33e-05,
    4.17e-05, 3.60e-05, 3.02e-05, -1.07e-05, 1.71e-05, 1.96e-05, 0.000154841, 0.000176573,
    -0.000183313, -0.000124398, 0.000208723, -2.45e-05, -0.000166757, 3.75e-05, -8.95e-05,
    -1.10e-05, 0.000160231, -0.000144611, 6.70e-05, 0.000197896, -0.000133362, 2.18e-05, 4.96e-05,
    -0.000102966, -0.000113156, 6.90e-05, 0.000223908, -5.21e-05, -0.000114398, 1.09e-05,
    -0.000149293, -0.000184584, -7.69e-06, 0.000326949, 0.000383046, -0.000155911, -0.000344682,
    -1.78e-05, 0.000194917, 9.32e-06, -8.97e-05, 2.55e-05, -0.000114486, -0.000171681, -0.000104313,
    0.000351496, 0.000438882, -0.000299235, 0.0001471, 0.000690544, -0.000223742, -0.000509184,
    -0.000120102, -0.000245239, 2.86e-05, 0.000461729, 0.000381211, 7.23e-05, 1.68e-05, 3.83e-05,
    -0.000166972, -3.13e-05, 0.000591257, 0.000788963, 8.26e-05, 0.001553861, 0.001768227,
    0.000100789, 0.000119232, -0.002128308, -0.001435404, 0.000929473, 1.72e-06, -0.000198592,
    -0.00104905, -0.001367665, -8.69e-05, 0.000833861, 0.00033352, -0.000626589, -0.000402217,
    -0.000213596, 7.50e-06, 0.000640802, 0.00016896, -0.000798728, -0.001007939,
];
