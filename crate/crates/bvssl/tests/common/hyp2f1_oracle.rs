//! Frozen evaluation points for the hypergeometric acceptance check:
//! 100 (a, c, z) draws from the marginal-likelihood call pattern
//! (a in [1,200], b = 1, c in [2,60], z in [0,0.99]) with ln 2F1
//! computed independently at 50 decimal digits.

pub const HYP2F1_ORACLE: [(f64, f64, f64, f64); 100] = [
    (8.031035727570835, 8.512485377760623, 0.15501387388782492, 0.1582924200513546517351),
    (62.15484381881946, 18.007348660753546, 0.08293005299653931, 0.3316443280318994949742),
    (69.96405266440918, 55.18017916978628, 0.31178831573338794, 0.5015010321484994375009),
    (51.16117437950446, 45.39725728719777, 0.09878680778047771, 0.1179907499925000654695),
    (87.96160360051321, 8.76944875929268, 0.8658094597436167, 137.9162195325925302169),
    (110.92660264499752, 3.473823900147858, 0.44822935553257276, 56.03600258878919786394),
    (154.4820800000065, 40.17975878706961, 0.2697515231581175, 2.627928347851365453362),
    (52.04107504560237, 27.306281819608525, 0.2813387117436678, 0.7488415643913573901578),
    (152.1474274293974, 6.934567701827652, 0.9722414833010982, 500.9989537459870888866),
    (194.68419503566855, 49.68937370749588, 0.6433270591983951, 65.49784091028139435561),
    (93.65532325397594, 46.862613407965746, 0.45918271421085044, 2.065804337072866408599),
    (169.52097489080163, 16.82472179650972, 0.08581950698937528, 1.478433590485017699663),
    (192.63139037770577, 59.86261557790135, 0.7444072626642669, 84.43135524509639646344),
    (115.33474934602427, 23.68604907483701, 0.9200465758850304, 181.3612581245431831058),
    (24.999696113467476, 44.55550920085497, 0.5327901167451627, 0.3583002084605312630701),
    (154.6129843847003, 4.815818885868813, 0.0657841629777854, 4.368512086867553745321),
    (146.60108709942173, 33.578759822757675, 0.49375346678219206, 25.74275600750925381189),
    (180.25482026542954, 47.625004891153566, 0.13564874553823464, 0.7051248766595180370192),
    (128.24951227987097, 5.729342049975383, 0.1727654217391167, 13.21502510145527306381),
    (58.348678783021136, 42.62022491919508, 0.17379498994257553, 0.2711281039239178776834),
    (140.83134207808777, 14.421368534671686, 0.3397486865720686, 25.34474007191895417031),
    (133.99885002339542, 43.33090300917352, 0.7971831297566608, 75.24976243272838481228),
    (155.6982640705543, 54.528308825538666, 0.2888418163985779, 1.584653028652474038956),
    (184.68695855158228, 31.67357500195517, 0.11053732696087404, 0.9716578611132414076658),
    (87.46626664058172, 43.5073244223025, 0.047812161897484724, 0.10093259080168361852),
    (55.08453161064929, 6.027906478696598, 0.2758198843030382, 7.5935304170998328066),
    (60.460935658907694, 57.42381420248361, 0.3994256219559879, 0.545236505561185290597),
    (110.52495782548698, 56.9113710356777, 0.646722659834809, 7.875691489619931665398),
    (131.62654359798944, 18.891957590649895, 0.3417427693344238, 16.88640296137096591221),
    (22.090672873723715, 17.79361011885966, 0.6393190278772616, 1.48453059357123434936),
    (191.46256078865088, 15.467171602685621, 0.17010643902572298, 9.655995937571548875488),
    (181.4296741362003, 59.50304881637213, 0.39178234033650405, 5.000061150796540638796),
    (73.16068882749019, 52.15744305950055, 0.918929666471978, 18.36055079759521162972),
    (177.13421634790842, 14.997976290510445, 0.5297148847937655, 85.2962014568136183842),
    (73.63310575124386, 14.132114314762994, 0.7924583150945838, 65.97443995526206069812),
    (186.7779388694415, 17.49417425146978, 0.41554480324708787, 52.53817417457082071625),
    (136.02872616493764, 50.95475107649091, 0.8105735789177296, 67.36785514003910173173),
    (89.32259228819954, 21.505409001586283, 0.5034869483898604, 16.6941807496241158139),
    (98.8196198485912, 52.27396431077588, 0.22391616509704748, 0.5458871546852148628448),
    (18.890195634520353, 28.573386377312385, 0.27131753510237283, 0.1985083062608557306834),
    (58.229870484210686, 23.70508702170935, 0.531540612614459, 5.065715148488624222939),
    (171.5925732848973, 7.917061351992562, 0.6551966652854582, 151.1992760328721507994),
    (169.10277880678294, 45.14547323483567, 0.9143726961684386, 216.9397424359240423318),
    (86.04633409515525, 18.117039176661653, 0.8646807850852685, 99.88086036806664608521),
    (22.63006036896519, 54.020047466999145, 0.605205459847703, 0.2953460190866672594464),
    (75.21869721883525, 43.550403608021924, 0.10841974305610047, 0.2068483714785430156922),
    (101.8929202396209, 39.84892456036637, 0.3941905211263503, 2.535150120513524844785),
    (97.27754045797963, 14.999500738426917, 0.5629868245035275, 39.22313100314944963151),
    (190.39524448749992, 5.851567776955745, 0.6114608450719291, 156.937475796551248483),
    (124.53561946163532, 17.342059213273846, 0.8452348745179808, 158.6038541120333327726),
    (14.146379837159927, 9.00687283052352, 0.604716303046208, 1.936508101206458709641),
    (180.74815760817708, 25.340111754153362, 0.294899446179868, 15.54061848691721224583),
    (126.32414206984197, 21.30705259080721, 0.5824625790249687, 50.38686622559688369392),
    (124.03836727521505, 48.648604849695694, 0.010443188933659076, 0.02697855772620838726686),
    (21.058654334317193, 4.335847377297795, 0.7169837803312046, 15.9106153487637666302),
    (165.77605418025487, 56.11006788352161, 0.011153379255079166, 0.0334941702946089985867),
    (197.76797083598098, 22.360568393322623, 0.8876924883675431, 323.0707978373672931786),
    (92.0713128297931, 15.502388318885494, 0.0006377095267618904, 0.003793927789893576454491),
    (120.59079846352073, 49.62349451820559, 0.07148646191969625, 0.1903152445560421524244),
    (140.61761261680786, 49.976969471877425, 0.6632273533507883, 32.03589748668752663178),
    (176.05324784513672, 19.57795730266821, 0.21615185830991906, 9.909315354401602499938),
    (102.39812081019754, 15.942329590831793, 0.11895995821918628, 1.207312016371137132551),
    (30.891160313611397, 52.573778239718344, 0.1743754101268923, 0.1082671095347211148235),
    (195.0807746247201, 25.413964395435986, 0.6320977481593351, 110.8852595203667653415),
    (156.94569205687833, 38.104020903865965, 0.7152054450782034, 79.98423938157039543773),
    (80.40599237355767, 7.796397204297669, 0.6735360540742187, 63.72834330036467865238),
    (69.384694501368, 29.503180627216636, 0.14154776201930983, 0.4003661960204268716282),
    (196.58831501646642, 23.093438707042548, 0.16044099455906763, 4.353117537868352901022),
    (106.61454714939461, 15.268580577742382, 0.12747342139510492, 1.546742299331056635103),
    (27.964936365155292, 21.607146548418033, 0.3285306107782679, 0.5486635848026313105793),
    (66.2708000493346, 21.198871512369465, 0.6932257431903267, 23.70165616654651984394),
    (142.39966022648235, 13.386510006759579, 0.9459632395180559, 340.2280992681414312773),
    (19.908707455583727, 6.549602733574217, 0.4265651579999207, 2.806970008755709355455),
    (55.12430108797326, 59.46258364855603, 0.35067964285647857, 0.3934808286153379478626),
    (64.34727197392806, 27.329578928342514, 0.8132093175380297, 28.51567316739976334025),
    (83.49087212586315, 14.279207857107433, 0.6458471982683893, 44.41568021371473772031),
    (198.6779175228041, 59.93784710708654, 0.11373195528665538, 0.4691683360765109740891),
    (17.51201138511458, 23.86834901590189, 0.16951410643123696, 0.1331055259368979086078),
    (180.24294105974155, 35.37464144658838, 0.33489988821634625, 12.06257162239985856071),
    (182.39610754128788, 40.245655571537505, 0.5050500894755643, 35.38558160645175833337),
    (20.553639601635588, 43.52166209171956, 0.5879932823614289, 0.3290471599517516720351),
    (90.41841102038236, 44.56734487787222, 0.350349667422075, 1.187851471767188817258),
    (184.05505116268924, 40.90184063177652, 0.07388519457119418, 0.3997998204219642904373),
    (194.00583600312785, 37.38074674471521, 0.5328288101651524, 52.058254965683311659),
    (111.20650712984084, 34.664021626382024, 0.07746650672512531, 0.2836738055359106169523),
    (180.54326041240265, 53.11021593746133, 0.06614726209052048, 0.253637730031635693594),
    (70.11867512338284, 53.18560435602462, 0.9170165266289577, 12.8742189513481664567),
    (91.97261983445249, 52.805363876354484, 0.4245001930062424, 1.294054944999081927498),
    (55.02031496233084, 37.93029725747157, 0.3821439136450194, 0.7969901929645431476429),
    (176.58601042273634, 13.234854804954331, 0.3612947306844833, 43.88824015427151008385),
    (107.90805986832883, 18.930806241686657, 0.3282238897083595, 9.697061225006727294499),
    (193.5475562798884, 21.85788178451741, 0.7020271794782232, 152.8042703623297894486),
    (190.95607384121053, 46.95221777349948, 0.44780566454394155, 20.62811056448633531268),
    (190.93661790990944, 28.41767837738791, 0.35726744607808025, 24.59660973106254562427),
    (30.786742439503513, 41.23659679708863, 0.9098266584432575, 1.173952506761816870557),
    (110.87571684153282, 10.77034208134393, 0.7488563682635379, 111.5799939273110061464),
    (150.33635563203612, 38.373634800849864, 0.7825096115749676, 100.0691671137333076871),
    (69.90181874547214, 55.17290776353624, 0.3004423905813002, 0.4777049250919674582036),
    (121.26383100383346, 59.08298995670144, 0.7465629139903159, 23.03218637943983717325),
    (87.39103447316276, 20.043095995363814, 0.23067326195375368, 2.099162770856786725452),
];
