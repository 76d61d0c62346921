#include "momentprop/scenario.hpp"

#include <utility>

#include "momentprop/errors.hpp"

// Built-in scenario definitions, stored in the same text format the parser
// accepts from files, so every model here doubles as format documentation.

namespace momentprop {

namespace {

struct BuiltinEntry {
    BuiltinScenario info;
    std::string text;
};

const char* kExample1 = R"(# Trigonometric moments of a uniform angle.
# One step pushes theta ~ U(0, 0.5) through cos and sin; the moments of
# (c, s) at k = 1 are E[cos^a(theta) sin^b(theta)].

[states]
c s

[dynamics]
c = cos(theta)
s = sin(theta)

[disturbances]
theta = uniform(0, 0.5)

[initial]
c = point(0)
s = point(0)

[run]
horizon = 1
targets = c s
orders = 1..3
)";

const char* kExample2 = R"(# Mixed polynomial and trigonometric moments of a uniform angle.
# Like example1 but also keeping theta itself, so order-4 moments at k = 1
# include cross terms such as E[theta^2 cos(theta) sin(theta)].

[states]
p c s

[dynamics]
p = theta
c = cos(theta)
s = sin(theta)

[disturbances]
theta = uniform(0, 0.5)

[initial]
p = point(0)
c = point(0)
s = point(0)

[run]
horizon = 1
targets = p c s
orders = 1..4
)";

const char* kPolarCaseI = R"(# Polar to Cartesian pushforward, near-Gaussian case.
# (x, y) = (1 + r) (cos(pi/2 + a), sin(pi/2 + a)) with small Gaussian noise
# on the radius r and angle a; one step of dynamics realizes the transform.

[states]
x y

[dynamics]
x = (1 + wr)*cos(pi/2 + wth)
y = (1 + wr)*sin(pi/2 + wth)

[disturbances]
wr = normal(0, 0.0004)
wth = normal(0, 0.04)

[initial]
x = point(0)
y = point(0)

[run]
horizon = 1
targets = x y
orders = 1..2
)";

const char* kCubicCaseI = R"(# Cubic sensor pushforward.
# One step maps eta ~ N(0, 0.1) through 0.9 eta^3 + eta; the k = 1 moments
# of omega are the output mean and second moment.

[states]
omega

[dynamics]
omega = 0.9*eta^3 + eta

[disturbances]
eta = normal(0, 0.1)

[initial]
omega = point(0)

[run]
horizon = 1
targets = omega
orders = 1..2
)";

const char* kExample5 = R"(# Heading random walk on a line.
# x advances by v cos(theta) while the heading theta accumulates
# gamma-distributed increments; moments of x up to order 5.

[states]
x theta

[dynamics]
x = x + v*cos(theta)
theta = theta + wt

[disturbances]
wt = gamma(1, 2)

[initial]
x = uniform(-0.1, 0.1)
theta = normal(0, 1)

[controls]
v = 0.5

[run]
horizon = 5
targets = x
orders = 1..5
)";

const char* kUnderwater = R"(# Planar underwater vehicle, constant forward speed.
# Unicycle kinematics with uniform actuation noise on speed and turn rate;
# time step 0.1, speed 2, zero nominal turn rate, heading near pi/4.

[states]
x y theta

[dynamics]
x = x + 0.1*(v + wv)*cos(theta)
y = y + 0.1*(v + wv)*sin(theta)
theta = theta + 0.1*(u + wth)

[disturbances]
wv = uniform(-0.1, 0.1)
wth = uniform(-0.1, 0.1)

[initial]
x = uniform(-0.1, 0.1)
y = uniform(-0.1, 0.1)
theta = uniform(pi/4 - 0.1, pi/4 + 0.1)

[controls]
v = 2
u = 0

[run]
horizon = 11
targets = x y
orders = 1..6
)";

const char* kGround = R"(# Ground vehicle with acceleration and steering inputs.
# Speed integrates a noisy acceleration, heading integrates a steering
# schedule that ramps with the step index plus beta-distributed noise.

[states]
x y v theta

[dynamics]
x = x + 0.1*v*cos(theta)
y = y + 0.1*v*sin(theta)
v = v + 0.1*(a + wv)
theta = theta + 0.1*(u + wth)

[disturbances]
wv = normal(0, 1)
wth = beta(1, 3)

[initial]
x = uniform(-0.1, 0.1)
y = uniform(-0.5, 0.5)
v = uniform(0, 0.1)
theta = uniform(pi/2 - 0.1, pi/2 + 0.1)

[controls]
a = 1
u = (2*pi/7.5)*(k - 5)

[run]
horizon = 11
targets = x y
orders = 1..6
)";

const char* kRimless = R"(# Rimless wheel rolling downhill, squared-speed return map.
# s is the squared angular speed before impact; the slope angle is Gaussian
# with mean pi/4 and variance 0.5 (a variance, not a standard deviation),
# and the spoke half-angle is pi/8.

[states]
s

[dynamics]
s = 0.5*s - 19.6 - 19.6*cos(gamma + pi/8) + 39.2*cos(gamma - pi/8)

[disturbances]
gamma = normal(pi/4, 0.5)

[initial]
s = uniform(-0.1, 0.1)

[run]
horizon = 10
targets = s
orders = 1..2
)";

const char* kPlanarAerial = R"(# Planar quadrotor with slightly unequal rotor thrusts.
# Velocities feel thrust through sin/cos of the pitch; gravity is carried as
# the constant state ag; the pitch rate follows the precomputed sequence
# vtheta(k) = 0.1 * 0.25 * (Fr - Fl) / J * k that the thrust imbalance
# Fr - Fl = 0.01 would produce with inertia J = 0.00383.

[states]
x y vx vy ag theta

[dynamics]
x = x + 0.1*vx
y = y + 0.1*vy
vx = vx - 0.2*(Fl + Fr)*sin(theta)
vy = vy - ag + 0.2*(Fl + Fr)*cos(theta)
ag = ag
theta = theta + 0.1*vtheta + 0.1*wth

[disturbances]
wth = uniform(-0.1, 0.1)

[initial]
x = uniform(-0.1, 0.1)
y = uniform(0.4, 0.5)
vx = uniform(-0.1, 0.1)
vy = uniform(-0.1, 0.1)
ag = point(0.98)
theta = uniform(-0.1, 0.1)

[controls]
Fl = 3
Fr = 3.01
vtheta = (0.1*0.25*(3.01 - 3)/0.00383)*k

[run]
horizon = 11
targets = x y
orders = 1..6
)";

const char* kAerial3d = R"(# 3D aerial vehicle with pitch and yaw kinematics.
# Position advances by speed times direction cosines of pitch theta and yaw
# psi; all three channels carry independent actuation noise.

[states]
x y z theta psi

[dynamics]
x = x + 0.1*(v + wv)*cos(psi)*cos(theta)
y = y + 0.1*(v + wv)*sin(psi)*cos(theta)
z = z + 0.1*(v + wv)*sin(theta)
theta = theta + 0.1*(utheta + wth)
psi = psi + 0.1*(upsi + wpsi)

[disturbances]
wv = beta(1, 3)
wth = normal(0, 0.3)
wpsi = uniform(-0.1, 0.1)

[initial]
x = uniform(-0.1, 0.1)
y = point(0.1)
z = uniform(0.1, 0.3)
theta = beta(1, 3)
psi = beta(3, 3)

[controls]
v = 1
utheta = 1
upsi = 1

[run]
horizon = 11
targets = x y z
orders = 1..6
)";

const char* kDiffDrive = R"(# Differential drive robot with asymmetric wheel noise.
# Wheel speed noise is uniform on the left and beta on the right; the
# mismatch makes the pose distribution skewed, a long horizon compounds it.

[states]
x y theta

[dynamics]
x = x + 0.05*(vl + wl + vr + wr)*cos(theta)
y = y + 0.05*(vl + wl + vr + wr)*sin(theta)
theta = theta + 0.1*(vr + wr - vl - wl)

[disturbances]
wl = uniform(-0.1, 0.1)
wr = beta(1, 3)

[initial]
x = uniform(-0.1, 0.1)
y = uniform(-0.1, 0.1)
theta = normal(0, 0.1)

[controls]
vl = 1
vr = 3

[run]
horizon = 26
targets = x y
orders = 1..6
)";

const char* kArm = R"(# Three-link arm forward kinematics under joint uncertainty.
# One step maps a noisy base position and three noisy joint angles through
# the end-effector position of a 3R arm with unit link lengths.

[states]
xe ye ze

[dynamics]
xe = xb + cos(t1)*(cos(t2) + cos(t2 + t3))
ye = yb + sin(t1)*(cos(t2) + cos(t2 + t3))
ze = zb + sin(t2) + sin(t2 + t3)

[disturbances]
xb = uniform(-0.1, 0.1)
yb = normal(0, 1)
zb = beta(3, 1)
t1 = uniform(-0.1, 0.1)
t2 = normal(pi/4, 1)
t3 = gamma(1, 2)

[initial]
xe = point(0)
ye = point(0)
ze = point(0)

[run]
horizon = 1
targets = xe ye ze
orders = 1..3
)";

const std::vector<BuiltinEntry>& registry() {
    static const std::vector<BuiltinEntry> entries = [] {
        std::vector<BuiltinEntry> r;
        const auto add = [&r](std::string name, std::string summary,
                              const char* text) {
            r.push_back({{std::move(name), std::move(summary)}, text});
        };
        add("example1", "trig moments of a uniform angle, one step",
            kExample1);
        add("example2", "mixed angle/trig moments of a uniform angle",
            kExample2);
        add("example3", "polar to Cartesian pushforward, Gaussian noise",
            kPolarCaseI);
        add("example4", "cubic sensor pushforward of a Gaussian", kCubicCaseI);
        add("example5", "heading random walk with gamma increments", kExample5);
        add("table1", "polar to Cartesian pushforward, Gaussian noise",
            kPolarCaseI);
        add("table2", "cubic sensor pushforward of a Gaussian", kCubicCaseI);
        add("underwater", "planar underwater vehicle, uniform actuation noise",
            kUnderwater);
        add("ground", "ground vehicle with a ramped steering schedule",
            kGround);
        add("rimless", "rimless wheel return map on a random slope", kRimless);
        add("planar_aerial", "planar quadrotor with unequal rotor thrusts",
            kPlanarAerial);
        add("aerial3d", "3D vehicle with pitch/yaw kinematics, mixed noise",
            kAerial3d);
        add("diffdrive", "differential drive robot, asymmetric wheel noise",
            kDiffDrive);
        add("arm", "three-link arm forward kinematics, one step", kArm);
        return r;
    }();
    return entries;
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() {
    static const std::vector<BuiltinScenario> list = [] {
        std::vector<BuiltinScenario> r;
        for (const auto& e : registry()) r.push_back(e.info);
        return r;
    }();
    return list;
}

bool is_builtin_scenario(const std::string& name) {
    for (const auto& e : registry()) {
        if (e.info.name == name) return true;
    }
    return false;
}

const std::string& builtin_scenario_text(const std::string& name) {
    for (const auto& e : registry()) {
        if (e.info.name == name) return e.text;
    }
    throw ValidationError("unknown built-in scenario '" + name + "'");
}

}  // namespace momentprop
