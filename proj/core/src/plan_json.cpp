// Copyright 2026 The Flowgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowgate/plan_json.hpp"

#include <array>
#include <cstdio>

#include <json.hpp>

#include "flowgate/error.hpp"

namespace flowgate::planner {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

ordered_json config_to_json(const PlanConfig& c) {
  ordered_json des;
  des["theta"] = c.des.theta ? ordered_json(*c.des.theta) : ordered_json(nullptr);
  des["adaptive_sigma"] = c.des.adaptive_sigma;
  des["eta"] = c.des.eta;
  des["window"] = c.des.window;
  des["min_event_len"] = c.des.min_event_len;

  ordered_json ransac;
  ransac["iterations"] = c.mtp.ransac.iterations;
  ransac["inlier_threshold"] = c.mtp.ransac.inlier_threshold;
  ransac["min_inlier_ratio"] = c.mtp.ransac.min_inlier_ratio;

  ordered_json mtp;
  mtp["grid"] = {c.mtp.grid_w, c.mtp.grid_h};
  mtp["sample_stride"] = c.mtp.sample_stride;
  mtp["motion_floor"] = c.mtp.motion_floor;
  mtp["score_resolution"] = c.mtp.score_resolution;
  mtp["ransac"] = std::move(ransac);

  ordered_json budget;
  budget["base_frames"] = c.budget.base_frames;
  budget["tokens_per_frame"] = c.budget.tokens_per_frame;
  budget["keep_percent"] = c.budget.keep_percent;
  budget["p_target"] = c.budget.p_target;

  ordered_json out;
  out["des"] = std::move(des);
  out["mtp"] = std::move(mtp);
  out["budget"] = std::move(budget);
  out["seed"] = c.mtp.ransac.seed;
  return out;
}

PlanConfig config_from_json(const ordered_json& j) {
  PlanConfig c;
  const auto& des = j.at("des");
  if (!des.at("theta").is_null()) c.des.theta = des.at("theta").get<double>();
  c.des.adaptive_sigma = des.at("adaptive_sigma").get<double>();
  c.des.eta = des.at("eta").get<double>();
  c.des.window = des.at("window").get<int>();
  c.des.min_event_len = des.at("min_event_len").get<int>();

  const auto& mtp = j.at("mtp");
  c.mtp.grid_w = mtp.at("grid").at(0).get<int>();
  c.mtp.grid_h = mtp.at("grid").at(1).get<int>();
  c.mtp.sample_stride = mtp.at("sample_stride").get<int>();
  c.mtp.motion_floor = mtp.at("motion_floor").get<double>();
  c.mtp.score_resolution = mtp.at("score_resolution").get<double>();
  c.mtp.ransac.iterations = mtp.at("ransac").at("iterations").get<int>();
  c.mtp.ransac.inlier_threshold = mtp.at("ransac").at("inlier_threshold").get<double>();
  c.mtp.ransac.min_inlier_ratio = mtp.at("ransac").at("min_inlier_ratio").get<double>();

  const auto& budget = j.at("budget");
  c.budget.base_frames = budget.at("base_frames").get<std::size_t>();
  c.budget.tokens_per_frame = budget.at("tokens_per_frame").get<std::size_t>();
  c.budget.keep_percent = budget.at("keep_percent").get<double>();
  c.budget.p_target = budget.at("p_target").get<double>();
  c.mtp.keep_percent = c.budget.keep_percent;
  c.mtp.ransac.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::size_t n = std::min<std::size_t>(3, bytes.size() - i);
    std::uint32_t chunk = static_cast<std::uint32_t>(bytes[i]) << 16;
    if (n > 1) chunk |= static_cast<std::uint32_t>(bytes[i + 1]) << 8;
    if (n > 2) chunk |= bytes[i + 2];
    for (std::size_t k = 0; k < 4; ++k) {
      out.push_back(k <= n ? kAlphabet[(chunk >> (18 - 6 * k)) & 0x3F] : '=');
    }
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(Errc::kInvalidArgument, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::uint32_t chunk = 0;
    std::size_t pad = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char ch = text[i + k];
      std::uint32_t v = 0;
      if (ch == '=' && i + 4 == text.size() && k >= 2) {
        ++pad;
      } else {
        const auto pos = kAlphabet.find(ch);
        if (pos == std::string_view::npos || pad > 0) throw Error(Errc::kInvalidArgument, "invalid base64 text");
        v = static_cast<std::uint32_t>(pos);
      }
      chunk = (chunk << 6) | v;
    }
    out.push_back(static_cast<std::uint8_t>(chunk >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(chunk >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(chunk));
  }
  return out;
}

std::vector<std::uint8_t> pack_mask(const TokenMask& mask) {
  std::vector<std::uint8_t> out((mask.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.kept[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

TokenMask unpack_mask(std::span<const std::uint8_t> bytes, int grid_w, int grid_h) {
  const std::size_t n = static_cast<std::size_t>(grid_w) * grid_h;
  if (bytes.size() != (n + 7) / 8) {
    throw Error(Errc::kCountMismatch, std::to_string(bytes.size()) + " mask bytes for " + std::to_string(n) +
                                          " patches");
  }
  TokenMask mask{grid_w, grid_h, std::vector<bool>(n, false), 1.0};
  for (std::size_t i = 0; i < n; ++i) mask.kept[i] = (bytes[i / 8] & (0x80u >> (i % 8))) != 0;
  return mask;
}

std::string config_json(const PlanConfig& config) { return config_to_json(config).dump(); }

std::string config_hash(const PlanConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : config_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize_plan(const SelectionPlan& plan) {
  ordered_json doc;
  doc["video"] = plan.video;
  doc["config"] = config_to_json(plan.config);

  ordered_json events = ordered_json::array();
  std::vector<std::size_t> selected;
  for (std::size_t e = 0; e < plan.events.size(); ++e) {
    const auto& ev = plan.events[e];
    if (ev.selected) selected.push_back(e);
    ordered_json j;
    j["start"] = ev.segment.start;
    j["end"] = ev.segment.end;
    j["anchor"] = ev.segment.anchor;
    j["alpha"] = ev.alpha;
    j["selected"] = ev.selected;
    j["priority"] = ev.priority;
    ordered_json frames = ordered_json::array();
    for (const auto& f : ev.frames) {
      ordered_json fj;
      fj["index"] = f.index;
      fj["role"] = std::string(to_string(f.role));
      if (f.mask) {
        fj["mask_b64"] = base64_encode(pack_mask(*f.mask));
        fj["tokens"] = f.mask->popcount();
      } else {
        fj["mask_b64"] = nullptr;
        fj["tokens"] = plan.config.budget.tokens_per_frame;
      }
      frames.push_back(std::move(fj));
    }
    j["frames"] = std::move(frames);
    events.push_back(std::move(j));
  }
  doc["events"] = std::move(events);

  ordered_json totals;
  totals["frames"] = plan.totals.frames;
  totals["tokens"] = plan.totals.tokens;
  totals["token_budget"] = plan.config.budget.token_budget();
  totals["selected_events"] = selected;
  totals["p_value"] = plan.p_value;
  doc["totals"] = std::move(totals);

  ordered_json prov;
  prov["config_hash"] = config_hash(plan.config);
  prov["seed"] = plan.provenance.seed;
  prov["flow_provider"] = plan.provenance.flow_provider;
  prov["saliency_provider"] = plan.provenance.saliency_provider;
  prov["embedding_provider"] = plan.provenance.embedding_provider;
  doc["provenance"] = std::move(prov);
  return doc.dump(2) + "\n";
}

SelectionPlan parse_plan(std::string_view text) {
  try {
    const auto doc = ordered_json::parse(text);
    SelectionPlan plan;
    plan.video = doc.at("video").get<std::string>();
    plan.config = config_from_json(doc.at("config"));
    const int gw = plan.config.mtp.grid_w;
    const int gh = plan.config.mtp.grid_h;
    for (const auto& j : doc.at("events")) {
      PlannedEvent ev;
      ev.segment = {j.at("start").get<std::size_t>(), j.at("end").get<std::size_t>(),
                    j.at("anchor").get<std::size_t>()};
      ev.alpha = j.at("alpha").get<double>();
      ev.selected = j.at("selected").get<bool>();
      ev.priority = j.at("priority").get<bool>();
      for (const auto& fj : j.at("frames")) {
        PlannedFrame f;
        f.index = fj.at("index").get<std::size_t>();
        const auto role = fj.at("role").get<std::string>();
        if (role != "anchor" && role != "pruned") throw Error(Errc::kInvalidArgument, "unknown frame role " + role);
        f.role = role == "anchor" ? FrameRole::kAnchor : FrameRole::kPruned;
        if (!fj.at("mask_b64").is_null()) {
          f.mask = unpack_mask(base64_decode(fj.at("mask_b64").get<std::string>()), gw, gh);
          f.mask->keep_fraction = plan.config.budget.keep_percent / 100.0;
        }
        ev.frames.push_back(std::move(f));
      }
      plan.events.push_back(std::move(ev));
    }
    if (!plan.events.empty()) plan.frame_count = plan.events.back().segment.end + 1;
    const auto& totals = doc.at("totals");
    plan.totals.frames = totals.at("frames").get<std::size_t>();
    plan.totals.tokens = totals.at("tokens").get<std::size_t>();
    plan.p_value = totals.at("p_value").get<double>();
    const auto& prov = doc.at("provenance");
    plan.provenance.seed = prov.at("seed").get<std::uint64_t>();
    plan.provenance.flow_provider = prov.at("flow_provider").get<std::string>();
    plan.provenance.saliency_provider = prov.at("saliency_provider").get<std::string>();
    plan.provenance.embedding_provider = prov.at("embedding_provider").get<std::string>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed plan: ") + e.what());
  }
}

}  // namespace flowgate::planner
