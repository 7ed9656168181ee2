#include "serialize.hpp"

#include <cmath>
#include <limits>

namespace nlse::cli {

using nlohmann::json;

WaveParams read_wave(const Config& c, bool need_omega, bool need_energy) {
  WaveParams p;
  p.omega = need_omega ? c.number("omega") : c.number("omega", 0.0);
  p.E = need_energy ? c.number("E") : c.number("E", 0.0);
  p.lambda = c.number("lambda", 1.0);
  p.epsilon = c.number("epsilon", 1.0);
  p.c = c.number("c", 0.0);
  c.text("nonlinearity", "cubic", {"cubic"});
  if (!(p.epsilon > 0.0)) {
    throw SchemaError(c.path() + "/epsilon: must be positive");
  }
  return p;
}

json wave_json(const WaveParams& p) {
  return json{{"omega", p.omega}, {"E", p.E},   {"lambda", p.lambda},
              {"epsilon", p.epsilon}, {"c", p.c}, {"nonlinearity", p.nonlinearity.name()}};
}

namespace {

json bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double unbound(const json& v, double fallback) { return v.is_null() ? fallback : v.get<double>(); }

}  // namespace

json to_json(const PiecewiseSolution& s) {
  json doc;
  doc["format"] = "nlse-segments/1";
  doc["blend_width"] = s.blend_width();
  json segs = json::array();
  for (const Segment& seg : s.segments()) {
    segs.push_back(json{{"params", wave_json(seg.profile.params())},
                        {"sign", seg.profile.sign()},
                        {"offset", seg.offset},
                        {"lo", bound(seg.lo)},
                        {"hi", bound(seg.hi)},
                        {"amplitude", seg.profile.amplitude()},
                        {"wavenumber", seg.profile.wavenumber()},
                        {"parameter", seg.profile.parameter()},
                        {"complement", seg.profile.complement()}});
  }
  doc["segments"] = segs;
  doc["stitch_points"] = s.stitch_points();
  doc["requested_points"] = s.requested_points();
  json mm = json::array();
  for (const auto& m : s.mismatch()) {
    mm.push_back(json{{"du", m.du}, {"ddu", m.ddu}});
  }
  doc["mismatch"] = mm;
  return doc;
}

PiecewiseSolution piecewise_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "nlse-segments/1") {
      throw SchemaError("unsupported segment-list format");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Segment> segments;
    for (const auto& s : doc.at("segments")) {
      const auto& p = s.at("params");
      WaveParams w;
      w.omega = p.at("omega").get<double>();
      w.E = p.at("E").get<double>();
      w.lambda = p.at("lambda").get<double>();
      w.epsilon = p.at("epsilon").get<double>();
      w.c = p.at("c").get<double>();
      const SolutionProfile profile = exact_solution(w).with_sign(s.at("sign").get<int>());
      segments.push_back(Segment{profile, unbound(s.at("lo"), -inf), unbound(s.at("hi"), inf),
                                 s.at("offset").get<double>()});
    }
    std::vector<StitchMismatch> mismatch;
    for (const auto& m : doc.at("mismatch")) {
      mismatch.push_back({m.at("du").get<double>(), m.at("ddu").get<double>()});
    }
    if (segments.size() < 2 || mismatch.size() + 1 != segments.size()) {
      throw SchemaError("segment list needs >= 2 segments and one mismatch entry per stitch");
    }
    return PiecewiseSolution(std::move(segments), std::move(mismatch),
                             doc.at("requested_points").get<std::vector<double>>(),
                             doc.at("blend_width").get<double>());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed segment list: ") + e.what());
  }
}

}  // namespace nlse::cli
