// generated by special_values.py (mpmath, 30 digits)
#![allow(clippy::excessive_precision)]

pub const ZETA: &[(f64, f64)] = &[
    (-0.9, -0.1011935039853518821564448),
    (-0.5878787878787879, -0.1783496851858595057825208),
    (-0.27575757575757576, -0.3064258087810285946714287),
    (0.03636363636363634, -0.5347923995149189315904749),
    (0.34848484848484845, -1.007052459322054311646245),
    (0.6606060606060605, -2.394469574197407485280972),
    (0.9727272727272727, -36.09144048531659007725315),
    (1.284848484848485, 4.108195028364136524110934),
    (1.596969696969697, 2.294023698921129583896767),
    (1.9090909090909092, 1.739212361400077310232091),
    (2.221212121212121, 1.47734530760580047104929),
    (2.533333333333333, 1.328892021188619852998606),
    (2.8454545454545452, 1.23578895712161682327846),
    (3.1575757575757577, 1.173587445579420337670901),
    (3.4696969696969697, 1.130216755092911608644646),
    (3.7818181818181817, 1.099042735529221093625526),
    (4.093939393939394, 1.076127082814859828142085),
    (4.406060606060606, 1.058992838242312098478319),
    (4.718181818181818, 1.04601116084857013049651),
    (5.03030303030303, 1.03607267807370029292692),
    (5.342424242424243, 1.028400314399852751767003),
    (5.654545454545454, 1.022437254390743685304525),
    (5.966666666666667, 1.017777040679163131720047),
    (6.278787878787878, 1.014118408119746043257098),
    (6.590909090909091, 1.011235218324319516032031),
    (6.903030303030303, 1.008955928392116880959741),
    (7.215151515151515, 1.007149258684559137256775),
    (7.527272727272727, 1.005713996127842505425429),
    (7.83939393939394, 1.004571619549491862050273),
    (8.151515151515152, 1.003660889564371592388305),
    (8.463636363636363, 1.002933830412430207933119),
    (8.775757575757575, 1.002352713540635576319936),
    (9.087878787878788, 1.00188777210976393176624),
    (9.4, 1.001515455348051351722087),
    (9.712121212121213, 1.001217085923876460270714),
    (10.024242424242424, 1.000977821043780300164469),
    (10.336363636363636, 1.000785844353643516207563),
    (10.648484848484848, 1.000631734511954910124616),
    (10.960606060606061, 1.000507969866805529540423),
    (11.272727272727273, 1.000408538572440003774709),
    (11.584848484848484, 1.000328630791032283185743),
    (11.896969696969697, 1.000264395072599479758943),
    (12.209090909090909, 1.000212745100672681843515),
    (12.521212121212121, 1.000171206093530565029854),
    (12.833333333333334, 1.000137792517618399795994),
    (13.145454545454545, 1.00011091058692948428225),
    (13.457575757575757, 1.000089280425119754353277),
    (13.76969696969697, 1.00007187385577698567975),
    (14.081818181818182, 1.000057864634757509336574),
    (14.393939393939394, 1.000046588602419952844772),
    (14.706060606060605, 1.000037511754887890059261),
    (15.018181818181818, 1.000030204644055196765958),
    (15.33030303030303, 1.000024321840302859142379),
    (15.642424242424243, 1.000019585448586748008188),
    (15.954545454545455, 1.000015771872188161217093),
    (16.266666666666666, 1.000012701180258966474934),
    (16.578787878787878, 1.000010228564127370041472),
    (16.89090909090909, 1.000008237470036520940272),
    (17.203030303030303, 1.00000663407796796519446),
    (17.515151515151516, 1.000005342861710160139029),
    (17.827272727272728, 1.000004303017729023030449),
    (18.13939393939394, 1.000003465592342672596189),
    (18.451515151515153, 1.000002791170305943312106),
    (18.763636363636362, 1.000002248014848484208967),
    (19.075757575757574, 1.000001810570817736977048),
    (19.387878787878787, 1.000001458259918456371047),
    (19.7, 1.00000117451096253622435),
    (20.01212121212121, 1.000000945979224920190558),
    (20.324242424242424, 1.000000761917985665530006),
    (20.636363636363637, 1.000000613672558900474236),
    (20.94848484848485, 1.000000494272914198210626),
    (21.26060606060606, 1.000000398105663503199581),
    (21.572727272727274, 1.000000320649940725962162),
    (21.884848484848487, 1.000000258264720843545884),
    (22.196969696969695, 1.000000208017554803636906),
    (22.509090909090908, 1.000000167546651377997344),
    (22.82121212121212, 1.000000134949810255752366),
    (23.133333333333333, 1.000000108694976775336194),
    (23.445454545454545, 1.000000087548207786848009),
    (23.757575757575758, 1.000000070515658474083951),
    (24.06969696969697, 1.00000005679686035921789),
    (24.381818181818183, 1.000000045747092381714353),
    (24.693939393939395, 1.000000036847075001964075),
    (25.006060606060608, 1.000000029678561937480864),
    (25.318181818181817, 1.000000023904681657049278),
    (25.63030303030303, 1.000000019254104223466696),
    (25.94242424242424, 1.000000015508289022356355),
    (26.254545454545454, 1.000000012491213822169471),
    (26.566666666666666, 1.000000010061102304820882),
    (26.87878787878788, 1.000000008103761182662211),
    (27.19090909090909, 1.000000006527213699982385),
    (27.503030303030304, 1.000000005257377268157724),
    (27.815151515151516, 1.000000004234582071212509),
    (28.12727272727273, 1.000000003410767012475714),
    (28.439393939393938, 1.000000002747221213016101),
    (28.75151515151515, 1.000000002212764916241179),
    (29.063636363636363, 1.000000001782284306494451),
    (29.375757575757575, 1.000000001435551383919007),
    (29.687878787878788, 1.000000001156273435444933),
    (30.0, 1.000000000931327432419668),
];

/// (s, G1 Mellin, H1 Mellin)
pub const MELLIN: &[(f64, f64, f64)] = &[
    (-0.9, 3.328674838539721726896552, 4.437739035271821599220153),
    (-0.5, 0.6638051731884025558440964, 0.8826889863526499821066533),
    (-0.25, 0.4429624794320573393083908, 0.5871234359992592284000135),
    (0.0, 0.3333333333333333333333333, 0.4399007113684322942171183),
    (0.1, 0.3036396686102770756597712, 0.3999054233191515776069901),
    (0.5, 0.2253021086622275244030463, 0.2939350500256255646243311),
    (0.75, 0.1950907574189383855483611, 0.2527796533920916279648161),
    (0.999999, 0.172784412502605249379648, 0.2222223285752023006400713),
    (1.0, 0.1727843350984671393934879, 0.2222222222222222222222222),
    (1.000001, 0.172784257694411638425534, 0.222222115869353200187039),
    (1.5, 0.1423108631569860669521297, 0.1801290355887344461065102),
    (2.0, 0.1227018310142792338813786, 0.1527361414431521967447124),
    (3.0, 0.09931436561346857153342061, 0.1196343283271832381511577),
    (5.0, 0.07717870747610501227810575, 0.08807763912738229366582087),
    (10.0, 0.0551114146004639454978442, 0.05870022382339771536021566),
    (0.9457131897620935, 0.1771115169768603599310748, 0.2281640079160487840857664),
    (0.9665927321612883, 0.175417082032035311848865, 0.2258382082870373403649178),
    (0.9616768726837202, 0.1758125607670342631774933, 0.2263811465781748512754944),
    (0.991314110361935, 0.1734597882153452668490832, 0.2231501992490862803544747),
];

pub const EULER_GAMMA: f64 = 0.5772156649015328606065121;
pub const ZETA_PRIME_ZERO: f64 = -0.9189385332046727417803297;
