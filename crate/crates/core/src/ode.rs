//! Dormand–Prince 8(5,3) with 7th-order dense output.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::scalar::Real;

pub type State<T, const N: usize> = [T; N];

#[derive(Clone, Copy, Debug)]
pub struct Options<T> {
    pub rtol: T,
    pub atol: T,
    pub h_max: T,
    pub h_min: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Options<T> {
    fn default() -> Self {
        Options {
            rtol: T::lit(1e-12),
            atol: T::lit(1e-14),
            h_max: T::lit(1.0),
            h_min: T::lit(1e-14),
            max_steps: 200_000,
        }
    }
}

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

// Dense output rows 4..7; columns are stages 1, 6..16.
const D: [[f64; 12]; 4] = [
    [
        -0.84289382761090128651353491142E+01,
        0.56671495351937776962531783590E+00,
        -0.30689499459498916912797304727E+01,
        0.23846676565120698287728149680E+01,
        0.21170345824450282767155149946E+01,
        -0.87139158377797299206789907490E+00,
        0.22404374302607882758541771650E+01,
        0.63157877876946881815570249290E+00,
        -0.88990336451333310820698117400E-01,
        0.18148505520854727256656404962E+02,
        -0.91946323924783554000451984436E+01,
        -0.44360363875948939664310572000E+01,
    ],
    [
        0.10427508642579134603413151009E+02,
        0.24228349177525818288430175319E+03,
        0.16520045171727028198505394887E+03,
        -0.37454675472269020279518312152E+03,
        -0.22113666853125306036270938578E+02,
        0.77334326684722638389603898808E+01,
        -0.30674084731089398182061213626E+02,
        -0.93321305264302278729567221706E+01,
        0.15697238121770843886131091075E+02,
        -0.31139403219565177677282850411E+02,
        -0.93529243588444783865713862664E+01,
        0.35816841486394083752465898540E+02,
    ],
    [
        0.19985053242002433820987653617E+02,
        -0.38703730874935176555105901742E+03,
        -0.18917813819516756882830838328E+03,
        0.52780815920542364900561016686E+03,
        -0.11573902539959630126141871134E+02,
        0.68812326946963000169666922661E+01,
        -0.10006050966910838403183860980E+01,
        0.77771377980534432092869265740E+00,
        -0.27782057523535084065932004339E+01,
        -0.60196695231264120758267380846E+02,
        0.84320405506677161018159903784E+02,
        0.11992291136182789328035130030E+02,
    ],
    [
        -0.25693933462703749003312586129E+02,
        -0.15418974869023643374053993627E+03,
        -0.23152937917604549567536039109E+03,
        0.35763911791061412378285349910E+03,
        0.93405324183624310003907691704E+02,
        -0.37458323136451633156875139351E+02,
        0.10409964950896230045147246184E+03,
        0.29840293426660503123344363579E+02,
        -0.43533456590011143754432175058E+02,
        0.96324553959188282948394950600E+02,
        -0.39177261675615439165231486172E+02,
        -0.14972683625798562581422125276E+03,
    ],
];

fn comb<T: Real, const N: usize>(
    y: &State<T, N>,
    h: T,
    terms: &[(f64, &State<T, N>)],
) -> State<T, N> {
    let mut out = *y;
    for (c, k) in terms {
        let c = T::lit(*c) * h;
        for i in 0..N {
            out[i] = out[i] + c * k[i];
        }
    }
    out
}

struct Trial<T, const N: usize> {
    y_new: State<T, N>,
    /// Stages 1, 6, 7, 8, 9, 10, 11, 12 in that order.
    k: [State<T, N>; 8],
    k4: State<T, N>,
    k5: State<T, N>,
    err: T,
}

fn trial<T: Real, const N: usize, F: Fn(T, &State<T, N>) -> State<T, N>>(
    f: &F,
    t: T,
    y: &State<T, N>,
    k1: &State<T, N>,
    h: T,
    opts: &Options<T>,
) -> Trial<T, N> {
    let l = T::lit;
    let k2 = f(t + l(C2) * h, &comb(y, h, &[(A21, k1)]));
    let k3 = f(t + l(C3) * h, &comb(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + l(C4) * h, &comb(y, h, &[(A41, k1), (A43, &k3)]));
    let k5 = f(
        t + l(C5) * h,
        &comb(y, h, &[(A51, k1), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + l(C6) * h,
        &comb(y, h, &[(A61, k1), (A64, &k4), (A65, &k5)]),
    );
    let k7 = f(
        t + l(C7) * h,
        &comb(y, h, &[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
    );
    let k8 = f(
        t + l(C8) * h,
        &comb(
            y,
            h,
            &[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)],
        ),
    );
    let k9 = f(
        t + l(C9) * h,
        &comb(
            y,
            h,
            &[
                (A91, k1),
                (A94, &k4),
                (A95, &k5),
                (A96, &k6),
                (A97, &k7),
                (A98, &k8),
            ],
        ),
    );
    let k10 = f(
        t + l(C10) * h,
        &comb(
            y,
            h,
            &[
                (A101, k1),
                (A104, &k4),
                (A105, &k5),
                (A106, &k6),
                (A107, &k7),
                (A108, &k8),
                (A109, &k9),
            ],
        ),
    );
    let k11 = f(
        t + l(C11) * h,
        &comb(
            y,
            h,
            &[
                (A111, k1),
                (A114, &k4),
                (A115, &k5),
                (A116, &k6),
                (A117, &k7),
                (A118, &k8),
                (A119, &k9),
                (A1110, &k10),
            ],
        ),
    );
    let k12 = f(
        t + h,
        &comb(
            y,
            h,
            &[
                (A121, k1),
                (A124, &k4),
                (A125, &k5),
                (A126, &k6),
                (A127, &k7),
                (A128, &k8),
                (A129, &k9),
                (A1210, &k10),
                (A1211, &k11),
            ],
        ),
    );
    let y_new = comb(
        y,
        h,
        &[
            (B1, k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ],
    );
    let (mut e5, mut e3) = (T::zero(), T::zero());
    for i in 0..N {
        let sk = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        let b = T::lit(B1) * k1[i]
            + T::lit(B6) * k6[i]
            + T::lit(B7) * k7[i]
            + T::lit(B8) * k8[i]
            + T::lit(B9) * k9[i]
            + T::lit(B10) * k10[i]
            + T::lit(B11) * k11[i]
            + T::lit(B12) * k12[i];
        let d3 = b - T::lit(BHH1) * k1[i] - T::lit(BHH2) * k9[i] - T::lit(BHH3) * k12[i];
        let d5 = T::lit(ER1) * k1[i]
            + T::lit(ER6) * k6[i]
            + T::lit(ER7) * k7[i]
            + T::lit(ER8) * k8[i]
            + T::lit(ER9) * k9[i]
            + T::lit(ER10) * k10[i]
            + T::lit(ER11) * k11[i]
            + T::lit(ER12) * k12[i];
        e3 = e3 + (d3 / sk).powi(2);
        e5 = e5 + (d5 / sk).powi(2);
    }
    let mut deno = e5 + T::lit(0.01) * e3;
    if deno <= T::zero() {
        deno = T::one();
    }
    let err = h.abs() * e5 * (T::one() / (deno * T::from_usize(N).unwrap())).sqrt();
    Trial {
        y_new,
        k: [*k1, k6, k7, k8, k9, k10, k11, k12],
        k4,
        k5,
        err,
    }
}

/// One accepted step with its dense-output polynomial.
#[derive(Clone, Copy, Debug)]
pub struct Step<T, const N: usize> {
    pub t0: T,
    pub h: T,
    pub y0: State<T, N>,
    pub y1: State<T, N>,
    cont: [State<T, N>; 8],
}

impl<T: Real, const N: usize> Step<T, N> {
    pub fn t1(&self) -> T {
        self.t0 + self.h
    }

    pub fn eval(&self, t: T) -> State<T, N> {
        let s = (t - self.t0) / self.h;
        let s1 = T::one() - s;
        let c = &self.cont;
        let mut out = [T::zero(); N];
        for i in 0..N {
            let par = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            out[i] = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + par * s1) * s) * s1) * s;
        }
        out
    }
}

fn dense<T: Real, const N: usize, F: Fn(T, &State<T, N>) -> State<T, N>>(
    f: &F,
    t: T,
    y: &State<T, N>,
    h: T,
    tr: &Trial<T, N>,
    k13: &State<T, N>,
) -> Step<T, N> {
    let [k1, k6, k7, k8, k9, k10, k11, k12] = &tr.k;
    let k14 = f(
        t + T::lit(C14) * h,
        &comb(
            y,
            h,
            &[
                (A141, k1),
                (A147, k7),
                (A148, k8),
                (A149, k9),
                (A1410, k10),
                (A1411, k11),
                (A1412, k12),
                (A1413, k13),
            ],
        ),
    );
    let k15 = f(
        t + T::lit(C15) * h,
        &comb(
            y,
            h,
            &[
                (A151, k1),
                (A156, k6),
                (A157, k7),
                (A158, k8),
                (A1511, k11),
                (A1512, k12),
                (A1513, k13),
                (A1514, &k14),
            ],
        ),
    );
    let k16 = f(
        t + T::lit(C16) * h,
        &comb(
            y,
            h,
            &[
                (A161, k1),
                (A166, k6),
                (A167, k7),
                (A168, k8),
                (A169, k9),
                (A1613, k13),
                (A1614, &k14),
                (A1615, &k15),
            ],
        ),
    );
    let ks: [&State<T, N>; 12] = [k1, k6, k7, k8, k9, k10, k11, k12, k13, &k14, &k15, &k16];
    let mut cont = [[T::zero(); N]; 8];
    for i in 0..N {
        let ydiff = tr.y_new[i] - y[i];
        let bspl = h * k1[i] - ydiff;
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k13[i] - bspl;
        for r in 0..4 {
            let mut acc = T::zero();
            for (j, k) in ks.iter().enumerate() {
                acc = acc + T::lit(D[r][j]) * k[i];
            }
            cont[4 + r][i] = h * acc;
        }
    }
    Step {
        t0: t,
        h,
        y0: *y,
        y1: tr.y_new,
        cont,
    }
}

/// Adaptive integrator state.
pub struct Dop853<T, const N: usize, F> {
    f: F,
    pub t: T,
    pub y: State<T, N>,
    k1: State<T, N>,
    h: T,
    facold: T,
    rejected_last: bool,
    opts: Options<T>,
    pub steps: usize,
    pub rejected: usize,
    pub evals: usize,
}

impl<T: Real, const N: usize, F: Fn(T, &State<T, N>) -> State<T, N>> Dop853<T, N, F> {
    pub fn new(f: F, t0: T, y0: State<T, N>, opts: Options<T>) -> Self {
        let k1 = f(t0, &y0);
        let mut s = Dop853 {
            f,
            t: t0,
            y: y0,
            k1,
            h: T::zero(),
            facold: T::lit(1e-4),
            rejected_last: false,
            opts,
            steps: 0,
            rejected: 0,
            evals: 1,
        };
        s.h = s.initial_step();
        s
    }

    fn initial_step(&mut self) -> T {
        let o = &self.opts;
        let (mut dnf, mut dny) = (T::zero(), T::zero());
        for i in 0..N {
            let sk = o.atol + o.rtol * self.y[i].abs();
            dnf = dnf + (self.k1[i] / sk).powi(2);
            dny = dny + (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= T::lit(1e-10) || dny <= T::lit(1e-10) {
            T::lit(1e-6)
        } else {
            (dny / dnf).sqrt() * T::lit(0.01)
        };
        h = h.min(o.h_max);
        let y1 = comb(&self.y, h, &[(1.0, &self.k1)]);
        let f1 = (self.f)(self.t + h, &y1);
        self.evals += 1;
        let mut der2 = T::zero();
        for i in 0..N {
            let sk = o.atol + o.rtol * self.y[i].abs();
            der2 = der2 + ((f1[i] - self.k1[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.abs().max(dnf.sqrt());
        let h1 = if der12 <= T::lit(1e-15) {
            T::lit(1e-6).max(h.abs() * T::lit(1e-3))
        } else {
            (T::lit(0.01) / der12).powf(T::one() / T::lit(8.0))
        };
        (T::lit(100.0) * h.abs()).min(h1).min(o.h_max).max(o.h_min)
    }

    pub fn rhs(&self) -> &F {
        &self.f
    }

    /// Advances one accepted step, never past `t_end` and never longer than `cap`.
    pub fn advance(&mut self, t_end: T, cap: T) -> Result<Step<T, N>> {
        let (safe, fac1, fac2, beta) = (T::lit(0.9), T::lit(0.333), T::lit(6.0), T::zero());
        let expo1 = T::one() / T::lit(8.0) - beta * T::lit(0.2);
        loop {
            if self.steps + self.rejected >= self.opts.max_steps {
                return Err(Error::Integration(format!(
                    "step budget exhausted at t = {}",
                    self.t
                )));
            }
            let room = t_end - self.t;
            if room <= T::zero() {
                return Err(Error::Integration("already at t_end".into()));
            }
            let mut h = self.h.min(cap).min(self.opts.h_max).min(room);
            if room - h < T::lit(1e-12) * room.abs().max(T::one()) {
                h = room;
            }
            if h < self.opts.h_min && h < room {
                return Err(Error::Integration(format!(
                    "step size underflow at t = {}",
                    self.t
                )));
            }
            let tr = trial(&self.f, self.t, &self.y, &self.k1, h, &self.opts);
            self.evals += 11;
            let fac11 = tr.err.powf(expo1);
            let fac = fac11 / self.facold.powf(beta);
            let fac = (T::one() / fac2).max((T::one() / fac1).min(fac / safe));
            if tr.err.is_finite() && tr.err <= T::one() {
                self.facold = tr.err.max(T::lit(1e-4));
                let t_new = self.t + h;
                let k13 = (self.f)(t_new, &tr.y_new);
                self.evals += 4;
                let step = dense(&self.f, self.t, &self.y, h, &tr, &k13);
                let _ = (&tr.k4, &tr.k5);
                let mut h_new = h / fac;
                if self.rejected_last {
                    h_new = h_new.min(h);
                }
                self.rejected_last = false;
                self.t = if h == room { t_end } else { t_new };
                self.y = tr.y_new;
                self.k1 = k13;
                self.h = h_new.max(self.opts.h_min);
                self.steps += 1;
                return Ok(step);
            }
            self.rejected += 1;
            self.rejected_last = true;
            self.h = if tr.err.is_finite() {
                h / (T::one() / fac1).min(fac11 / safe)
            } else {
                h * T::lit(0.1)
            };
        }
    }
}

/// Fixed step from `(t, y)` of length `h`, no error control.
pub fn exact_step<T: Real, const N: usize, F: Fn(T, &State<T, N>) -> State<T, N>>(
    f: &F,
    t: T,
    y: &State<T, N>,
    h: T,
) -> State<T, N> {
    if h == T::zero() {
        return *y;
    }
    let k1 = f(t, y);
    trial(f, t, y, &k1, h, &Options::default()).y_new
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Increasing,
    Decreasing,
    Either,
}

impl Crossing {
    fn accepts<T: Real>(self, g0: T, g1: T) -> bool {
        let up = g0 < T::zero() && g1 >= T::zero();
        let down = g0 > T::zero() && g1 <= T::zero();
        match self {
            Crossing::Increasing => up,
            Crossing::Decreasing => down,
            Crossing::Either => up || down,
        }
    }
}

/// Root of `g` inside an accepted step, located on the dense output and
/// then polished with exact steps from the step start.
pub fn locate_event<T: Real, const N: usize, F, G>(
    f: &F,
    step: &Step<T, N>,
    g: &G,
) -> Result<(T, State<T, N>)>
where
    F: Fn(T, &State<T, N>) -> State<T, N>,
    G: Fn(&State<T, N>) -> T,
{
    let gd = |t: T| g(&step.eval(t));
    let tol = T::epsilon() * T::lit(4.0) * step.t1().abs().max(T::one());
    let t_dense = brent(gd, step.t0, step.t1(), tol)?;
    let ge = |t: T| g(&exact_step(f, step.t0, &step.y0, t - step.t0));
    // Secant on the exact-step map, seeded from the dense root.
    let (mut ta, mut tb) = (t_dense, t_dense + (step.h * T::lit(1e-7)).max(tol));
    let (mut ga, mut gb) = (ge(ta), ge(tb));
    for _ in 0..6 {
        if gb == ga || gb == T::zero() {
            break;
        }
        let tn = tb - gb * (tb - ta) / (gb - ga);
        if !tn.is_finite() || (tn - tb).abs() > step.h.abs() {
            break;
        }
        ta = tb;
        ga = gb;
        tb = tn;
        gb = ge(tb);
        if (tb - ta).abs() <= tol {
            break;
        }
    }
    let t_star = if gb.abs() <= gd(t_dense).abs() {
        tb
    } else {
        t_dense
    };
    Ok((t_star, exact_step(f, step.t0, &step.y0, t_star - step.t0)))
}

#[derive(Clone, Debug)]
pub enum Outcome<T, const N: usize> {
    Event { t: T, y: State<T, N> },
    Timeout { t: T, y: State<T, N> },
    Stopped { t: T, y: State<T, N> },
}

/// Integrates until the first accepted crossing of `g`, `t_max`, or `stop(y)`.
/// `cap(y)` bounds the step taken from `y`; `skip` suppresses events for
/// `t − t0 < skip`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_to_event<T, const N: usize, F, G, C, S>(
    f: F,
    t0: T,
    y0: State<T, N>,
    t_max: T,
    g: G,
    dir: Crossing,
    skip: T,
    cap: C,
    stop: S,
    opts: Options<T>,
    mut record: Option<&mut Vec<(T, State<T, N>)>>,
) -> Result<Outcome<T, N>>
where
    T: Real,
    F: Fn(T, &State<T, N>) -> State<T, N>,
    G: Fn(&State<T, N>) -> T,
    C: Fn(&State<T, N>) -> T,
    S: Fn(&State<T, N>) -> bool,
{
    let mut s = Dop853::new(f, t0, y0, opts);
    if let Some(r) = record.as_deref_mut() {
        r.push((t0, y0));
    }
    while s.t < t_max {
        let c = cap(&s.y);
        let step = s.advance(t_max, c)?;
        if let Some(r) = record.as_deref_mut() {
            r.push((s.t, s.y));
        }
        if step.t1() - t0 > skip && dir.accepts(g(&step.y0), g(&step.y1)) {
            let (te, ye) = locate_event(s.rhs(), &step, &g)?;
            if te - t0 > skip {
                return Ok(Outcome::Event { t: te, y: ye });
            }
        }
        if stop(&s.y) {
            return Ok(Outcome::Stopped { t: s.t, y: s.y });
        }
    }
    Ok(Outcome::Timeout { t: s.t, y: s.y })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(_t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn harmonic_period() {
        let mut s = Dop853::new(rotation, 0.0, [1.0, 0.0], Options::default());
        let tp = 2.0 * std::f64::consts::PI;
        while s.t < tp {
            s.advance(tp, 1.0).unwrap();
        }
        assert!((s.y[0] - 1.0).abs() < 1e-11 && s.y[1].abs() < 1e-11);
    }

    #[test]
    fn dense_output_is_accurate() {
        let mut s = Dop853::new(rotation, 0.0, [1.0, 0.0], Options::default());
        let step = s.advance(10.0, 0.5).unwrap();
        for i in 0..=10 {
            let t = step.t0 + step.h * i as f64 / 10.0;
            let y = step.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-12 && (y[1] + t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn event_quarter_period() {
        let out = integrate_to_event(
            rotation,
            0.0,
            [1.0, 0.0],
            10.0,
            |y: &[f64; 2]| y[0],
            Crossing::Decreasing,
            0.0,
            |_: &[f64; 2]| 1.0,
            |_: &[f64; 2]| false,
            Options::default(),
            None,
        )
        .unwrap();
        match out {
            Outcome::Event { t, y } => {
                assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
                assert!(y[0].abs() < 1e-15 && (y[1] + 1.0).abs() < 1e-11);
            }
            _ => panic!("no event"),
        }
    }

    #[test]
    fn eighth_order_convergence() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let e = |h: f64| (exact_step(&f, 0.0, &[1.0], h)[0] - h.exp()).abs();
        let ratio = e(0.4) / e(0.2);
        assert!(ratio > 2f64.powi(8), "ratio {ratio}");
    }
}
