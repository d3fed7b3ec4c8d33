#include "crkfr/scheme.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "crkfr/errors.hpp"

namespace crkfr {

namespace {

std::string lower(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::tolower(c); });
  return r;
}

[[noreturn]] void bad(std::string_view what, std::string_view value) {
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(value) + "'");
}

}  // namespace

std::string_view to_string(Dissipation d) {
  switch (d) {
    case Dissipation::D1: return "d1";
    case Dissipation::D2: return "d2";
    case Dissipation::DCSX: return "dcsx";
  }
  return "?";
}

std::string_view to_string(TraceMode m) { return m == TraceMode::EA ? "ea" : "ae"; }

std::string_view to_string(BlendKind b) {
  switch (b) {
    case BlendKind::None: return "none";
    case BlendKind::FO: return "fo";
    case BlendKind::MH: return "mh";
  }
  return "?";
}

std::string_view to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::Inflow: return "inflow";
    case BoundaryKind::Outflow: return "outflow";
    case BoundaryKind::Wall: return "wall";
    case BoundaryKind::MixedHllc: return "mixed_hllc";
    case BoundaryKind::Problem: return "problem";
  }
  return "?";
}

std::string_view to_string(BoundaryTreatment t) {
  return t == BoundaryTreatment::InterfaceGhost ? "interface" : "ghost_element";
}

std::string_view to_string(DtSpeed s) { return s == DtSpeed::Mean ? "mean" : "nodal_max"; }

Dissipation parse_dissipation(std::string_view s) {
  const auto v = lower(s);
  if (v == "d1") return Dissipation::D1;
  if (v == "d2") return Dissipation::D2;
  if (v == "dcsx" || v == "d-csx" || v == "d_csx") return Dissipation::DCSX;
  bad("dissipation model", s);
}

TraceMode parse_trace_mode(std::string_view s) {
  const auto v = lower(s);
  if (v == "ea") return TraceMode::EA;
  if (v == "ae") return TraceMode::AE;
  bad("trace mode", s);
}

BlendKind parse_blend_kind(std::string_view s) {
  const auto v = lower(s);
  if (v == "none" || v == "off") return BlendKind::None;
  if (v == "fo") return BlendKind::FO;
  if (v == "mh") return BlendKind::MH;
  bad("blending scheme", s);
}

BoundaryKind parse_boundary_kind(std::string_view s) {
  const auto v = lower(s);
  if (v == "periodic") return BoundaryKind::Periodic;
  if (v == "inflow" || v == "dirichlet") return BoundaryKind::Inflow;
  if (v == "outflow") return BoundaryKind::Outflow;
  if (v == "wall" || v == "reflect") return BoundaryKind::Wall;
  if (v == "mixed_hllc" || v == "hllc") return BoundaryKind::MixedHllc;
  if (v == "problem") return BoundaryKind::Problem;
  bad("boundary kind", s);
}

BoundaryTreatment parse_boundary_treatment(std::string_view s) {
  const auto v = lower(s);
  if (v == "interface" || v == "interface_ghost") return BoundaryTreatment::InterfaceGhost;
  if (v == "ghost_element" || v == "ghost") return BoundaryTreatment::GhostElement;
  bad("boundary treatment", s);
}

DtSpeed parse_dt_speed(std::string_view s) {
  const auto v = lower(s);
  if (v == "mean") return DtSpeed::Mean;
  if (v == "nodal_max" || v == "max") return DtSpeed::NodalMax;
  bad("time step speed", s);
}

}  // namespace crkfr
