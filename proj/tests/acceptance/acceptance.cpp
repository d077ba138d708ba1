// Acceptance harness: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail NAME]...
// Exits 0 when the failing criteria are exactly the expected ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "../../tools/commands.hpp"
#include "softbody/ahp.hpp"
#include "softbody/dynamics.hpp"
#include "softbody/error.hpp"
#include "softbody/mesh.hpp"
#include "softbody/recording.hpp"
#include "softbody/scene.hpp"
#include "softbody/session.hpp"

using namespace softbody;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SOFTBODY_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

// ---- AHP ----------------------------------------------------------------------------------

// Column-normalize, then average rows.
std::vector<double> oracle_weights(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<double> col(n, 0.0), w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) col[j] += a[i][j];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] / col[j];
    w[i] /= static_cast<double>(n);
  }
  return w;
}

std::vector<double> weights_from_output(const std::string& text, const std::string& title) {
  std::istringstream in(text);
  std::string line;
  bool inside = false;
  std::vector<double> w;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      inside = line == title;
      continue;
    }
    if (!inside) continue;
    const auto comma = line.rfind(',');
    w.push_back(std::stod(line.substr(comma + 1)));
  }
  return w;
}

Outcome ahp_reproduction() {
  Outcome o;
  cli::AhpOptions opts;
  opts.value_matrix = kData / "ahp" / "value_matrix.csv";
  opts.cost_matrix = kData / "ahp" / "cost_matrix.csv";
  std::ostringstream out, err;
  o.require(cli::cmd_ahp(opts, out, err) == cli::kOk, "cmd_ahp failed: " + err.str());

  const std::vector<double> published_value{0.45, 0.23, 0.14, 0.02, 0.09, 0.05};
  const std::vector<double> published_cost{0.40, 0.22, 0.16, 0.02, 0.11, 0.06};
  const auto value = weights_from_output(out.str(), "# relative value");
  const auto cost = weights_from_output(out.str(), "# relative cost");
  o.require(value.size() == 6 && cost.size() == 6, "expected six weights per table");
  if (value.size() != 6 || cost.size() != 6) return o;

  const auto value_m = ahp::read_matrix_csv(opts.value_matrix.string());
  const auto cost_m = ahp::read_matrix_csv(opts.cost_matrix->string());
  const auto value_oracle = oracle_weights(value_m.entries);
  const auto cost_oracle = oracle_weights(cost_m.entries);

  for (std::size_t i = 0; i < 6; ++i) {
    const std::string& label = value_m.labels[i];
    o.require(std::abs(value[i] - value_oracle[i]) <= 5e-5, "value " + label + " disagrees with oracle");
    o.require(std::abs(cost[i] - cost_oracle[i]) <= 5e-5, "cost " + label + " disagrees with oracle");
    o.require(std::abs(value[i] - published_value[i]) <= 0.01,
              "value " + label + " " + fixed(value[i]) + " vs published " + fixed(published_value[i], 2));
    o.require(std::abs(cost[i] - published_cost[i]) <= 0.01,
              "cost " + label + " " + fixed(cost[i]) + " vs published " + fixed(published_cost[i], 2) +
                  " (published normalized cell (DragObject,SaveSimulation) reads 0.57, arithmetic gives 5/6.711=0.745)");
  }
  const double v00 = ahp::normalize(value_m)[0][0];
  const double c00 = ahp::normalize(cost_m)[0][0];
  o.require(std::abs(v00 - 0.57) <= 0.005, "value cell " + fixed(v00));
  o.require(std::abs(c00 - 0.56) <= 0.005, "cost cell " + fixed(c00));
  o.note("value cell " + fixed(v00, 3) + ", cost cell " + fixed(c00, 3));
  return o;
}

// ---- Integrator orders --------------------------------------------------------------------

WorldState oscillator() {
  WorldState w;
  ElasticObject o;
  Particle anchor;
  anchor.id = 0;
  anchor.position = {-2.0, 0.0, 0.0};
  anchor.mass = 1.0;
  anchor.fixed = true;
  Particle bob;
  bob.id = 1;
  bob.position = {1.0, 0.0, 0.0};
  bob.mass = 1.0;
  o.particles = {anchor, bob};
  o.springs = {Spring{0, 1, 1.0, 0.0, 2.0}};
  w.add_object(std::move(o));
  w.params.gravity = {};
  w.params.bounds = {{-100, -100, -100}, {100, 100, 100}};
  return w;
}

// Analytic solution x(t) = cos t.
double oscillator_error(IntegratorKind kind, double dt, double t_end) {
  WorldState w = oscillator();
  const long n = std::lround(t_end / dt);
  for (long i = 0; i < n; ++i) step(w, dt, kind);
  return std::abs(w.particle(0, 1).position.x - std::cos(static_cast<double>(n) * dt));
}

Outcome integrator_orders() {
  Outcome o;
  struct Case {
    IntegratorKind kind;
    double dt;
    double lo, hi;
  };
  for (const Case& c : {Case{IntegratorKind::Euler, 0.01, 1.7, 2.3}, Case{IntegratorKind::Midpoint, 0.01, 3.4, 4.6},
                        Case{IntegratorKind::RungeKutta4, 0.05, 13.0, 19.0}}) {
    const double ratio = oscillator_error(c.kind, c.dt, 1.0) / oscillator_error(c.kind, c.dt / 2, 1.0);
    const std::string name(integrator_name(c.kind));
    o.require(ratio >= c.lo && ratio <= c.hi, name + " ratio " + fixed(ratio, 2));
    o.note(name + " " + fixed(ratio, 2));
  }
  const double period = 2.0 * std::numbers::pi;
  WorldState w = oscillator();
  const long n = static_cast<long>(period / 0.01);
  for (long i = 0; i < n; ++i) step(w, 0.01, IntegratorKind::RungeKutta4);
  step(w, period - static_cast<double>(n) * 0.01, IntegratorKind::RungeKutta4);
  const double err = std::abs(w.particle(0, 1).position.x - 1.0);
  o.require(err <= 1e-6, "rk4 period error " + sci(err));
  o.note("rk4 period error " + sci(err));
  return o;
}

// ---- Conservation -------------------------------------------------------------------------

Outcome conservation() {
  Outcome o;
  WorldState w;
  w.params.gravity = {};
  w.params.bounds = {{-50, -50, -50}, {50, 50, 50}};
  w.add_object(build_two_layer_sphere(1, 1.0, 0.6, 4.0, {60.0, 0.5}, 8.0, 3.0));
  o.require(w.objects[0].particles.size() == 84, "sphere has " + std::to_string(w.objects[0].particles.size()));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& p : w.objects[0].particles) {
    p.position += 0.05 * Vec3{u(rng), u(rng), u(rng)};
    p.velocity = 0.5 * Vec3{u(rng), u(rng), u(rng)};
  }

  // Pressure alone on the perturbed closed layers.
  {
    WorldState pw = w;
    clear_forces(pw);
    apply_pressure_forces(pw);
    Vec3 sum;
    double magnitude = 0.0;
    for (const auto& p : pw.objects[0].particles) {
      sum += p.force;
      magnitude += norm(p.force);
    }
    const double rel = norm(sum) / magnitude;
    o.require(magnitude > 0.0 && rel < 1e-9, "pressure sum relative " + sci(rel));
    o.note("pressure sum " + sci(rel));
  }

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 before, after;
    double scale = 0.0;
    for (const auto& p : w.objects[0].particles) {
      before += p.mass * p.velocity;
      scale += p.mass * norm(p.velocity);
    }
    step(w, 1.0 / 60, IntegratorKind::RungeKutta4);
    for (const auto& p : w.objects[0].particles) after += p.mass * p.velocity;
    worst = std::max(worst, norm(after - before) / scale);
  }
  o.require(worst < 1e-9, "momentum drift per step " + sci(worst));
  o.note("worst momentum drift per step " + sci(worst));
  return o;
}

// ---- Persistence --------------------------------------------------------------------------

double random_real(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-1000, 1000);
  switch (kind(rng)) {
    case 0: return 0.0;
    case 1: return u(rng);
    case 2: return u(rng) * 4e-320;
    case 3: return 0.1 * std::round(u(rng) * 1000);
    default: return std::ldexp(u(rng), exponent(rng));
  }
}

Recording random_recording(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> frames(1, 8), objects(1, 3), particles(1, 6);
  Recording r;
  r.meta.created = "2026-03-04T05:06:07Z";
  r.meta.dt = 1.0 / 60;
  r.meta.integrator = "midpoint";
  double t = 0.0;
  const int nf = frames(rng);
  for (int f = 0; f < nf; ++f) {
    FrameRecord frame;
    frame.index = f;
    frame.t = t;
    t = std::max(t + std::abs(random_real(rng)) + 1e-3, std::nextafter(t, INFINITY));
    const int no = objects(rng);
    for (int k = 0; k < no; ++k) {
      ObjectRecord obj;
      obj.id = k;
      const int np = particles(rng);
      for (int p = 0; p < np; ++p) {
        ParticleRecord pr;
        pr.id = p;
        pr.position = {random_real(rng), random_real(rng), random_real(rng)};
        pr.velocity = {random_real(rng), random_real(rng), random_real(rng)};
        pr.force = {random_real(rng), random_real(rng), random_real(rng)};
        pr.mass = std::abs(random_real(rng));
        obj.particles.push_back(pr);
      }
      frame.objects.push_back(std::move(obj));
    }
    r.frames.push_back(std::move(frame));
  }
  return r;
}

Outcome persistence() {
  Outcome o;
  std::mt19937_64 rng(808);
  int identical = 0, agreeing = 0;
  for (int i = 0; i < 200; ++i) {
    const Recording r = random_recording(rng);
    std::ostringstream xml, csv;
    write_xml(r, xml);
    write_csv(r, csv);
    std::istringstream xml_in(xml.str()), csv_in(csv.str());
    const Recording from_xml = load_xml(xml_in);
    const Recording from_csv = load_csv(csv_in);
    if (from_xml == r) ++identical;
    bool same = from_csv.frames.size() == from_xml.frames.size();
    for (std::size_t f = 0; same && f < r.frames.size(); ++f) {
      same = from_csv.frames[f].t == from_xml.frames[f].t && from_csv.frames[f].objects == from_xml.frames[f].objects;
    }
    if (same) ++agreeing;
  }
  o.require(identical == 200, std::to_string(identical) + "/200 XML round-trips identical");
  o.require(agreeing == 200, std::to_string(agreeing) + "/200 XML and CSV payloads agree");
  o.note("200/200 cases");
  return o;
}

// ---- Use-case scripts ---------------------------------------------------------------------

struct ScriptRun {
  int exit = -1;
  std::vector<json> lines;
  std::string err;

  const json* first(const std::string& type) const {
    for (const auto& l : lines)
      if (l.at("type") == type) return &l;
    return nullptr;
  }
  std::vector<const json*> all(const std::string& type) const {
    std::vector<const json*> found;
    for (const auto& l : lines)
      if (l.at("type") == type) found.push_back(&l);
    return found;
  }
};

ScriptRun run_script(const std::string& name, std::size_t capacity = 0) {
  cli::ScriptOptions s;
  s.run.scene = kData / "scenes" / "usecase_disc.json";
  s.script = kData / "scripts" / (name + ".json");
  if (capacity) s.run.capacity = capacity;
  std::ostringstream out, err;
  ScriptRun r;
  r.exit = cli::cmd_script(s, out, err);
  r.err = err.str();
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) r.lines.push_back(json::parse(line));
  return r;
}

Vec3 particle_position(const json& state, int object, int particle) {
  const json& p = state.at("objects").at(object).at("particles").at(particle);
  return {p.at("px").get<double>(), p.at("py").get<double>(), p.at("pz").get<double>()};
}

void check_saved(Outcome& o, const std::string& tc, const ScriptRun& r, const std::regex& expected_path,
                 std::size_t expected_frames) {
  const json* saved = r.first("saved");
  o.require(saved != nullptr, tc + ": no saved event");
  if (!saved) return;
  const std::string path = saved->at("path").get<std::string>();
  o.require(std::regex_match(path, expected_path), tc + ": saved to " + path);
  o.require(fs::exists(path), tc + ": " + path + " missing");
  if (!fs::exists(path)) return;
  const Recording rec = load_recording(path);
  o.require(!rec.frames.empty(), tc + ": empty recording");
  if (expected_frames) {
    o.require(rec.frames.size() == expected_frames,
              tc + ": " + std::to_string(rec.frames.size()) + " frames saved");
  }
  o.require(recording_violations(rec).empty(), tc + ": recording has violations");
}

Outcome use_case_scripts() {
  Outcome o;
  const fs::path old_cwd = fs::current_path();
  const fs::path cwd = fs::temp_directory_path() / ("softbody-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(cwd);
  fs::create_directories(cwd / "custom_saves");
  fs::current_path(cwd);

  // TC_DragObject_1: the grabbed particle moves along the drag direction.
  {
    const ScriptRun r = run_script("tc_drag_object_1");
    const auto drags = r.all("drag");
    const json* release = r.first("release");
    o.require(r.exit == cli::kOk && !drags.empty() && release, "DragObject_1: missing drag or release");
    if (!drags.empty() && release) {
      const int obj = drags.back()->at("object"), part = drags.back()->at("particle");
      const Vec3 start = particle_position(*r.first("initial"), obj, part);
      const auto& tv = drags.back()->at("target");
      const Vec3 target{tv[0].get<double>(), tv[1].get<double>(), tv[2].get<double>()};
      const Vec3 axis = target - start;
      const double along = dot(particle_position(*release, obj, part) - start, axis) / norm(axis);
      o.require(along > 0.0, "DragObject_1: displacement along drag " + fixed(along));
      o.note("DO1 +" + fixed(along, 3));
    }
  }
  // TC_DragObject_2: each nudge moves the target.
  {
    const ScriptRun r = run_script("tc_drag_object_2");
    const auto drags = r.all("drag");
    o.require(r.exit == cli::kOk && drags.size() == 11,
              "DragObject_2: " + std::to_string(drags.size()) + " drag updates");
    for (std::size_t i = 1; i < drags.size(); ++i) {
      const double before = drags[i - 1]->at("target")[0], after = drags[i]->at("target")[0];
      o.require(after > before, "DragObject_2: nudge " + std::to_string(i) + " did not move the target right");
    }
    o.require(r.first("release") != nullptr, "DragObject_2: no release");
  }
  // TC_DragObject_3: drag past the boundary, release, body keeps moving and stays in bounds.
  {
    const ScriptRun r = run_script("tc_drag_object_3");
    const SceneConfig scene = load_scene(kData / "scenes" / "usecase_disc.json");
    const auto drags = r.all("drag");
    const json* release = r.first("release");
    const json* final_line = r.first("final");
    o.require(r.exit == cli::kOk && release && final_line, "DragObject_3: incomplete run");
    for (const json* d : drags) {
      const auto& tv = d->at("target");
      o.require(scene.world.bounds.contains({tv[0], tv[1], tv[2]}), "DragObject_3: target outside bounds");
    }
    if (release && final_line) {
      o.require(final_line->at("in_bounds") == true, "DragObject_3: particle left the bounds");
      double moved = 0.0;
      const auto& ps = release->at("objects")[0].at("particles");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        moved = std::max(moved, norm(particle_position(*final_line, 0, static_cast<int>(i)) -
                                     particle_position(*release, 0, static_cast<int>(i))));
      }
      o.require(moved > 1e-3, "DragObject_3: body did not move after release");
    }
  }
  const std::regex stamp_name(R"(\./recordings/simulation-\d{8}T\d{6}Z\.xml)");
  // TC_SaveSimulation_1: default directory and default name.
  {
    const ScriptRun r = run_script("tc_save_simulation_1");
    o.require(r.exit == cli::kOk && r.first("save_prompt"), "SaveSimulation_1: no prompt");
    check_saved(o, "SaveSimulation_1", r, stamp_name, 0);
  }
  // TC_SaveSimulation_2: capacity error, prompt, partial dump saved.
  {
    const ScriptRun r = run_script("tc_save_simulation_2", 10);
    std::vector<std::string> sequence;
    for (const auto& l : r.lines) {
      if (l.at("type") == "error") sequence.push_back(l.at("code"));
      if (l.at("type") == "save_prompt" || l.at("type") == "saved") sequence.push_back(l.at("type"));
    }
    const std::vector<std::string> expected{"capacity_exceeded", "save_prompt", "saved"};
    o.require(r.exit == cli::kOk && sequence == expected, "SaveSimulation_2: event sequence differs");
    const json* prompt = r.first("save_prompt");
    o.require(prompt && prompt->at("frames") == 10, "SaveSimulation_2: prompt frame count");
    check_saved(o, "SaveSimulation_2", r, stamp_name, 10);
  }
  // TC_SaveSimulation_3: custom directory.
  {
    const ScriptRun r = run_script("tc_save_simulation_3");
    check_saved(o, "SaveSimulation_3", r, std::regex(R"(custom_saves/simulation-\d{8}T\d{6}Z\.xml)"), 0);
  }
  // TC_SaveSimulation_4: custom name.
  {
    const ScriptRun r = run_script("tc_save_simulation_4");
    check_saved(o, "SaveSimulation_4", r, std::regex(R"(\./recordings/my_run\.xml)"), 0);
  }

  fs::current_path(old_cwd);
  fs::remove_all(cwd);
  o.note("7/7 cases");
  return o;
}

// ---- Oracle equivalence -------------------------------------------------------------------

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-4.0, 4.0), unit(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 3), depth(0, 1), kind(0, 2);
  int nearest_ok = 0, force_ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    WorldState w;
    w.params.bounds = {{-6, -6, -6}, {6, 6, 6}};
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      ElasticObject obj;
      switch (kind(rng)) {
        case 0: obj = build_chain(7, 2.0, 1.0, {25.0, 0.3}); break;
        case 1: obj = build_two_layer_disc(10, 1.0, 0.6, 2.0, {30.0, 0.4}, 6.0, 2.0); break;
        default: obj = build_two_layer_sphere(depth(rng), 1.0, 0.6, 3.0, {40.0, 0.5}, 8.0, 3.0); break;
      }
      translate(obj, {u(rng) * 0.5, u(rng) * 0.5, u(rng) * 0.5});
      for (auto& p : obj.particles) {
        p.position += 0.05 * Vec3{unit(rng), unit(rng), unit(rng)};
        p.velocity = Vec3{unit(rng), unit(rng), unit(rng)};
      }
      w.add_object(std::move(obj));
    }

    const Vec3 q{u(rng), u(rng), u(rng)};
    const NearestParticle hit = nearest_particle(w, q);
    double best = INFINITY;
    int bo = -1, bp = -1;
    for (std::size_t k = 0; k < w.objects.size(); ++k)
      for (std::size_t i = 0; i < w.objects[k].particles.size(); ++i) {
        const Vec3 d = w.objects[k].particles[i].position - q;
        const double dist = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
        if (dist < best) best = dist, bo = static_cast<int>(k), bp = static_cast<int>(i);
      }
    if (hit.object == bo && hit.particle == bp) ++nearest_ok;

    ForceInputs inputs;
    inputs.drag = DragHandle{bo, bp, {u(rng), u(rng), u(rng)}};
    inputs.external = {{0, 0, {unit(rng), unit(rng), unit(rng)}}};
    WorldState plain = w;
    accumulate_forces(plain, inputs);
    const ForceBreakdown b = total_force(w, inputs);
    bool same = true;
    for (std::size_t k = 0; k < w.objects.size(); ++k)
      for (std::size_t i = 0; i < w.objects[k].particles.size(); ++i) {
        const auto& e = b.objects[k][i];
        Vec3 sum;
        for (const Vec3& part : e.by_source) sum += part;
        const Vec3 ref = plain.objects[k].particles[i].force;
        const double scale = std::max(1.0, norm(ref));
        const double err = std::max(norm(e.total - ref), norm(sum - ref)) / scale;
        worst = std::max(worst, err);
        same = same && err <= 1e-12;
      }
    if (same) ++force_ok;
  }
  o.require(nearest_ok == 100, std::to_string(nearest_ok) + "/100 nearest-particle agreements");
  o.require(force_ok == 100, std::to_string(force_ok) + "/100 force breakdowns within 1e-12");
  o.note("100/100 worlds, worst force error " + sci(worst));
  return o;
}

// ---- Performance --------------------------------------------------------------------------

Outcome performance() {
  Outcome o;
  const SceneConfig scene = load_scene(kData / "scenes" / "sphere_fine.json");
  Session session(scene);
  session.start_simulation();
  const auto& obj = session.world().objects.at(0);
  o.require(obj.particles.size() == 324, "sphere has " + std::to_string(obj.particles.size()) + " particles");

  o.require(scene.integrator == IntegratorKind::RungeKutta4, "scene integrator is not rk4");

  int blowups = 0;
  const auto count_blowups = [&](const FrameSnapshot& f) {
    for (const auto& e : f.events)
      if (const auto* err = std::get_if<ErrorEvent>(&e); err && err->code == ErrorCode::NumericalBlowup) ++blowups;
  };
  for (int i = 0; i < 30; ++i) count_blowups(session.tick(scene.dt));
  const int ticks = 600;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < ticks; ++i) count_blowups(session.tick(scene.dt));
  o.require(blowups == 0, std::to_string(blowups) + " rolled-back ticks");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rate = ticks / seconds;
  o.require(rate >= 60.0, fixed(rate, 1) + " ticks/s");
  o.note(fixed(rate, 0) + " ticks/s, " + std::to_string(obj.springs.size()) + " springs");
  return o;
}

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
  double budget_s;  // 0 means no runtime limit
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("acceptance"));
  std::set<std::string> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected_failures.insert(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--expect-fail NAME]...\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {"ahp_reproduction", ahp_reproduction, 1.0},
      {"integrator_orders", integrator_orders, 5.0},
      {"conservation", conservation, 10.0},
      {"persistence_round_trip", persistence, 10.0},
      {"use_case_scripts", use_case_scripts, 30.0},
      {"oracle_equivalence", oracle_equivalence, 0.0},
      {"desk_scale_performance", performance, 0.0},
  };

  std::set<std::string> failed;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) outcome.require(seconds < c.budget_s, "runtime " + fixed(seconds, 2) + " s");
    if (!outcome.pass) failed.insert(c.name);
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << c.name << " [" << fixed(seconds, 3) << " s] "
              << outcome.detail;
    if (!outcome.pass && expected_failures.count(c.name)) std::cout << " (known failure)";
    std::cout << '\n';
  }

  std::cout << (criteria.size() - failed.size()) << '/' << criteria.size() << " criteria passed\n";
  if (failed != expected_failures) {
    for (const auto& name : expected_failures)
      if (!failed.count(name)) std::cout << "expected failure did not occur: " << name << '\n';
    return 1;
  }
  return 0;
}
