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

#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "flowgate/embedding_io.hpp"
#include "flowgate/flow_io.hpp"
#include "flowgate/image_io.hpp"
#include "flowgate/mtp.hpp"
#include "flowgate/parallel.hpp"
#include "flowgate/plan_json.hpp"
#include "flowgate/providers.hpp"

namespace flowgate::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
}

std::string quote_shell(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

// Runs the decoder hook into a scratch directory and loads what it wrote.
std::vector<Frame> decode_video(const fs::path& video, const std::string& decoder) {
  if (decoder.empty()) throw Error(Errc::kInvalidArgument, "--video needs --decoder");
  std::string scratch = (fs::temp_directory_path() / "flowgate-decode-XXXXXX").string();
  if (::mkdtemp(scratch.data()) == nullptr) throw Error(Errc::kIo, "cannot create a scratch directory");
  std::string command = replace_all(decoder, "{input}", quote_shell(video.string()));
  command = replace_all(command, "{output}", quote_shell(scratch));
  spdlog::info("decoding {} with: {}", video.string(), command);
  const int status = std::system(command.c_str());
  std::vector<Frame> frames;
  std::error_code ec;
  try {
    if (status != 0) throw Error(Errc::kProviderFailure, "decoder exited with status " + std::to_string(status));
    frames = load_frames(scratch);
  } catch (...) {
    fs::remove_all(scratch, ec);
    throw;
  }
  fs::remove_all(scratch, ec);
  return frames;
}

std::unique_ptr<FlowProvider> make_flow_provider(const PipelineOptions& o, std::span<const Frame> frames) {
  if (o.flow == "builtin") return std::make_unique<BlockMatchingFlowProvider>(frames);
  if (frames.empty()) throw Error(Errc::kTooFewFrames, "need ≥ 2 frames");
  return std::make_unique<DirectoryFlowProvider>(o.flow, frames.size() - 1, frames.front().width(),
                                                 frames.front().height());
}

std::unique_ptr<SaliencyProvider> make_saliency_provider(const PipelineOptions& o, const Frame& first) {
  if (o.saliency_dir) {
    return std::make_unique<DirectorySaliencyProvider>(*o.saliency_dir, first.width(), first.height());
  }
  return std::make_unique<UniformSaliencyProvider>(first.width(), first.height(), 1.0f);
}

ordered_json events_to_json(std::span<const des::EventSegment> events) {
  ordered_json out = ordered_json::array();
  for (const auto& e : events) out.push_back({{"start", e.start}, {"end", e.end}, {"anchor", e.anchor}});
  return out;
}

ordered_json des_config_json(const des::DesConfig& c) {
  ordered_json j;
  j["theta"] = c.theta ? ordered_json(*c.theta) : ordered_json("adaptive");
  j["adaptive_sigma"] = c.adaptive_sigma;
  j["eta"] = c.eta;
  j["window"] = c.window;
  j["min_event_len"] = c.min_event_len;
  return j;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(10);
  os << v;
  return os.str();
}

// Overlay of frame `f` with dropped patches dimmed to a quarter brightness.
Frame overlay(const Frame& f, const std::optional<TokenMask>& mask) {
  std::vector<std::uint8_t> rgb(f.pixels().begin(), f.pixels().end());
  if (mask) {
    const int w = f.width();
    const int h = f.height();
    for (int y = 0; y < h; ++y) {
      const int gy = static_cast<int>(static_cast<long long>(y) * mask->grid_h / h);
      for (int x = 0; x < w; ++x) {
        const int gx = static_cast<int>(static_cast<long long>(x) * mask->grid_w / w);
        if (mask->kept[static_cast<std::size_t>(gy) * mask->grid_w + gx]) continue;
        for (int c = 0; c < 3; ++c) {
          auto& px = rgb[3 * (static_cast<std::size_t>(y) * w + x) + c];
          px = static_cast<std::uint8_t>(px / 4);
        }
      }
    }
  }
  return Frame(f.index(), f.width(), f.height(), std::move(rgb));
}

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto log = spdlog::stderr_color_mt("flowgate");
    log->set_pattern("[%l] %v");
    spdlog::set_default_logger(log);
  });
  const char* env = std::getenv("FLOWGATE_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  return spdlog::default_logger();
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::kProviderFailure: return kExitProvider;
    case Errc::kTokenBudgetExceeded:
    case Errc::kAnchorsExceedBudget: return kExitBudget;
    default: return kExitValidation;
  }
}

void PipelineOptions::validate() const {
  const auto must_exist = [](const fs::path& p, const char* what) {
    std::error_code ec;
    if (!fs::exists(p, ec)) throw Error(Errc::kInvalidArgument, std::string(what) + " not found: " + p.string());
  };
  if (frames_dir) must_exist(*frames_dir, "frames directory");
  if (video) must_exist(*video, "video");
  if (flow != "builtin") must_exist(flow, "flow directory");
  if (saliency_dir) must_exist(*saliency_dir, "saliency directory");
  if (embeddings) must_exist(*embeddings, "embedding file");
  if (query) must_exist(*query, "query file");
  if (events_file) must_exist(*events_file, "events file");
  if (workers < 1) throw Error(Errc::kInvalidArgument, "workers must be >= 1");
  config.des.validate();
  config.mtp.validate();
  config.budget.validate();
  if (config.budget.tokens_per_frame != static_cast<std::size_t>(config.mtp.grid_w) * config.mtp.grid_h) {
    throw Error(Errc::kInvalidArgument, "tokens per frame must equal the number of grid cells");
  }
}

Workspace load_workspace(const PipelineOptions& o) {
  Workspace ws;
  if (o.frames_dir) {
    ws.frames = load_frames(*o.frames_dir);
    ws.video_name = o.frames_dir->filename().string();
    if (ws.video_name == "frames" || ws.video_name.empty()) {
      ws.video_name = fs::absolute(*o.frames_dir).lexically_normal().parent_path().filename().string();
    }
  } else if (o.video) {
    ws.frames = decode_video(*o.video, o.decoder);
    ws.video_name = o.video->stem().string();
  }
  if (!o.name.empty()) ws.video_name = o.name;
  spdlog::debug("loaded {} frames for '{}'", ws.frames.size(), ws.video_name);
  return ws;
}

std::vector<des::EventSegment> read_events_json(const fs::path& path, std::size_t& frame_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  try {
    const auto doc = ordered_json::parse(in);
    std::vector<std::size_t> starts;
    std::size_t next = 0;
    for (const auto& e : doc.at("events")) {
      const auto start = e.at("start").get<std::size_t>();
      const auto end = e.at("end").get<std::size_t>();
      if (start != next || end < start) {
        throw Error(Errc::kBoundaryOutOfRange, path.string() + ": events must tile the video contiguously");
      }
      if (start > 0) starts.push_back(start);
      next = end + 1;
    }
    frame_count = doc.contains("frames") ? doc.at("frames").get<std::size_t>() : next;
    if (frame_count != next) throw Error(Errc::kBoundaryOutOfRange, path.string() + ": events do not cover every frame");
    return des::split_events(frame_count, starts);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, path.string() + ": " + e.what());
  }
}

EventsReport obtain_events(const PipelineOptions& o, const Workspace& ws) {
  EventsReport report;
  if (o.events_file) {
    report.events = read_events_json(*o.events_file, report.frame_count);
    if (!ws.frames.empty() && ws.frames.size() != report.frame_count) {
      throw Error(Errc::kCountMismatch, "events cover " + std::to_string(report.frame_count) + " frames, found " +
                                            std::to_string(ws.frames.size()));
    }
    return report;
  }
  if (ws.frames.size() < 2) {
    throw Error(Errc::kTooFewFrames, "need ≥ 2 frames, got " + std::to_string(ws.frames.size()));
  }
  const auto flows = make_flow_provider(o, ws.frames);
  report.split = des::dynamic_event_split(ws.frames, *flows, o.config.des, o.workers);
  report.events = report.split->events;
  report.frame_count = ws.frames.size();
  spdlog::info("{} candidates, {} boundaries, {} events", report.split->candidates.size(),
               report.split->transitions.size(), report.events.size());
  return report;
}

SelectionReport obtain_selection(const PipelineOptions& o, const EventsReport& ev) {
  SelectionReport report;
  const std::size_t n = ev.events.size();
  if (!o.query) {
    if (o.embeddings) spdlog::warn("no --query given; every event is equally significant");
    report.table = ecq::uniform_significance(n);
    report.embedding_provider = "none";
  } else {
    if (!o.embeddings) throw Error(Errc::kInvalidArgument, "--query needs --embeddings");
    const auto rows = load_embeddings(*o.embeddings);
    const auto query = load_embeddings(*o.query);
    if (query.size() != 1) {
      throw Error(Errc::kCountMismatch, o.query->string() + " holds " + std::to_string(query.size()) +
                                            " records, expected 1");
    }
    std::vector<ecq::EmbeddingVector> anchors;
    if (rows.size() == n) {
      anchors = rows;
    } else if (rows.size() == ev.frame_count) {
      for (const auto& e : ev.events) anchors.push_back(rows[e.anchor]);
    } else {
      throw Error(Errc::kCountMismatch, o.embeddings->string() + " holds " + std::to_string(rows.size()) +
                                            " embeddings for " + std::to_string(n) + " events and " +
                                            std::to_string(ev.frame_count) + " frames");
    }
    report.table = ecq::event_significance(anchors, query.front(), o.normalize_embeddings);
    report.has_query = true;
    report.embedding_provider = "emb:" + o.embeddings->filename().string();
  }
  report.result = ecq::select_events_minimal(report.table, o.config.budget.p_target);
  return report;
}

void cmd_segment(const PipelineOptions& o) {
  const auto ws = load_workspace(o);
  if (o.events_file) throw Error(Errc::kInvalidArgument, "segment computes events; --events is not accepted");
  const auto report = obtain_events(o, ws);
  const auto& split = *report.split;

  ordered_json doc;
  doc["video"] = ws.video_name;
  doc["frames"] = report.frame_count;
  doc["config"] = des_config_json(o.config.des);
  doc["theta"] = split.theta;
  doc["candidates"] = split.candidates;
  doc["transitions"] = split.transitions;
  doc["events"] = events_to_json(report.events);
  write_text(o.out_dir / "events.json", doc.dump(2) + "\n");

  std::string csv = "transition,delta_v,candidate,boundary\n";
  for (std::size_t t = 0; t < split.series.values.size(); ++t) {
    const bool candidate = std::binary_search(split.candidates.begin(), split.candidates.end(), t);
    const bool boundary = std::binary_search(split.transitions.begin(), split.transitions.end(), t);
    csv += std::to_string(t) + "," + format_double(split.series.values[t]) + "," + (candidate ? "1" : "0") + "," +
           (boundary ? "1" : "0") + "\n";
  }
  write_text(o.out_dir / "diff.csv", csv);
  std::cout << report.events.size() << " events written to " << (o.out_dir / "events.json").string() << "\n";
}

void cmd_select(const PipelineOptions& o) {
  Workspace ws;
  if (!o.events_file) ws = load_workspace(o);
  const auto events = obtain_events(o, ws);
  const auto sel = obtain_selection(o, events);

  ordered_json doc;
  doc["events"] = events.events.size();
  doc["p_target"] = o.config.budget.p_target;
  doc["query"] = sel.has_query;
  doc["normalized"] = o.normalize_embeddings;
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < sel.table.size(); ++i) {
    const bool chosen = std::binary_search(sel.result.selected.begin(), sel.result.selected.end(), i);
    entries.push_back({{"event", i},
                       {"anchor", events.events[i].anchor},
                       {"similarity", sel.table.entries[i].similarity},
                       {"alpha", sel.table.entries[i].alpha},
                       {"selected", chosen}});
  }
  doc["entries"] = std::move(entries);
  doc["selected"] = sel.result.selected;
  doc["achieved_mass"] = sel.result.achieved_mass;
  doc["p_value"] = sel.result.p_value;
  write_text(o.out_dir / "selection.json", doc.dump(2) + "\n");
  std::cout << sel.result.selected.size() << " of " << events.events.size() << " events selected, p-value "
            << format_double(sel.result.p_value) << "\n";
}

void cmd_plan(const PipelineOptions& o) {
  const auto ws = load_workspace(o);
  if (ws.frames.empty()) throw Error(Errc::kTooFewFrames, "need ≥ 2 frames (give --frames or --video)");
  const auto events = obtain_events(o, ws);
  const auto sel = obtain_selection(o, events);
  const auto flows = make_flow_provider(o, ws.frames);
  const auto saliency = make_saliency_provider(o, ws.frames.front());

  std::map<MtpStatus, std::size_t> status_counts;
  std::mutex status_mutex;
  const planner::MaskSource masks = [&](std::span<const std::size_t> frames) {
    std::vector<TokenMask> out(frames.size());
    parallel_for(frames.size(), o.workers, [&](std::size_t i) {
      auto r = mtp_frame(frames[i], *flows, *saliency, o.config.mtp);
      out[i] = std::move(r.mask);
      std::lock_guard lock(status_mutex);
      ++status_counts[r.status];
    });
    return out;
  };

  std::vector<double> alphas;
  for (const auto& e : sel.table.entries) alphas.push_back(e.alpha);
  const planner::SelectionInput input{events.events, alphas, sel.result.selected};
  auto planned = planner::plan_events(input, o.config.budget, masks);
  for (const auto& [status, count] : status_counts) spdlog::info("{} masks: {}", to_string(status), count);
  if (planned.schedule.frame_budget < planner::default_frame_budget(events.events.size(), o.config.budget)) {
    spdlog::warn("fail-open masks reduced the frame budget to {}", planned.schedule.frame_budget);
  }

  planner::SelectionPlan plan;
  plan.video = ws.video_name;
  plan.frame_count = ws.frames.size();
  plan.config = o.config;
  plan.events = std::move(planned.events);
  plan.totals = planned.totals;
  plan.p_value = sel.result.p_value;
  plan.provenance = {flows->id(), saliency->id(), sel.embedding_provider, o.seed()};

  const auto issues = planner::check_plan(plan);
  if (!issues.empty()) {
    for (const auto& issue : issues) spdlog::error("plan invariant: {}", issue);
    throw std::logic_error("assembled plan violates " + std::to_string(issues.size()) + " invariant(s)");
  }
  write_text(o.out_dir / "plan.json", planner::serialize_plan(plan));

  if (o.overlays) {
    fs::create_directories(o.out_dir / "overlays");
    for (const auto& ev : plan.events) {
      for (const auto& f : ev.frames) {
        char name[40];
        std::snprintf(name, sizeof name, "overlay_%06zu.png", f.index);
        save_frame_png(o.out_dir / "overlays" / name, overlay(ws.frames[f.index], f.mask));
      }
    }
  }
  std::cout << plan.totals.frames << " frames, " << plan.totals.tokens << " tokens written to "
            << (o.out_dir / "plan.json").string() << "\n";
}

std::size_t validate_providers(const PipelineOptions& o, std::ostream& report) {
  std::size_t checked = 0;
  std::size_t problems = 0;
  const auto check = [&](const fs::path& path, auto&& fn) {
    ++checked;
    try {
      fn();
      report << "ok    " << path.string() << "\n";
    } catch (const std::exception& e) {
      ++problems;
      report << "FAIL  " << path.string() << ": " << e.what() << "\n";
    }
  };
  const auto numbered = [](const fs::path& dir, const std::string& prefix, const std::string& ext) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (name.starts_with(prefix) && entry.path().extension() == ext) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  int width = 0;
  int height = 0;
  std::optional<std::size_t> frame_count;
  if (o.frames_dir) {
    const auto files = list_frame_files(*o.frames_dir);
    for (const auto& path : files) {
      check(path, [&] {
        const Image img = read_image(path, 3);
        if (width == 0) {
          width = img.width;
          height = img.height;
        } else if (img.width != width || img.height != height) {
          throw Error(Errc::kDimensionMismatch, std::to_string(img.width) + "x" + std::to_string(img.height) +
                                                    " differs from " + std::to_string(width) + "x" +
                                                    std::to_string(height));
        }
      });
    }
    frame_count = files.size();
    if (files.size() < 2) {
      ++problems;
      report << "FAIL  " << o.frames_dir->string() << ": need ≥ 2 frames, found " << files.size() << "\n";
    }
  }
  const auto expect_size = [&](int w, int h) {
    if (width > 0 && (w != width || h != height)) {
      throw Error(Errc::kDimensionMismatch, std::to_string(w) + "x" + std::to_string(h) + ", frames are " +
                                                std::to_string(width) + "x" + std::to_string(height));
    }
  };

  if (o.flow != "builtin") {
    std::vector<fs::path> files;
    if (frame_count && *frame_count > 0) {
      for (std::size_t t = 0; t + 1 < *frame_count; ++t) files.push_back(fs::path(o.flow) / flow_file_name(t));
    } else {
      files = numbered(o.flow, "flow_", ".flo");
    }
    for (const auto& path : files) {
      check(path, [&] {
        if (!fs::exists(path)) throw Error(Errc::kProviderFailure, "missing");
        const FlowField f = load_flow(path);
        expect_size(f.width(), f.height());
      });
    }
  }

  if (o.saliency_dir) {
    std::vector<fs::path> files;
    if (frame_count && *frame_count > 0) {
      for (std::size_t t = 0; t < *frame_count; ++t) files.push_back(*o.saliency_dir / saliency_file_name(t));
    } else {
      files = numbered(*o.saliency_dir, "sal_", ".png");
    }
    for (const auto& path : files) {
      check(path, [&] {
        if (!fs::exists(path)) throw Error(Errc::kProviderFailure, "missing");
        const ImageInfo info = probe_image(path);
        if (info.channels != 1 || info.bit_depth != 8) {
          throw Error(Errc::kInvalidArgument, "expected 8-bit grayscale, found " + std::to_string(info.channels) +
                                                  " channel(s) at " + std::to_string(info.bit_depth) + " bits");
        }
        expect_size(info.width, info.height);
        read_image(path, 1);
      });
    }
  }

  std::optional<std::size_t> dim;
  if (o.embeddings) {
    check(*o.embeddings, [&] {
      const auto rows = load_embeddings(*o.embeddings);
      if (rows.empty()) throw Error(Errc::kEmptyEventList, "no records");
      dim = rows.front().dim();
    });
  }
  if (o.query) {
    check(*o.query, [&] {
      const auto rows = load_embeddings(*o.query);
      if (rows.size() != 1) throw Error(Errc::kCountMismatch, std::to_string(rows.size()) + " records, expected 1");
      if (dim && rows.front().dim() != *dim) {
        throw Error(Errc::kDimensionMismatch, "dimension " + std::to_string(rows.front().dim()) +
                                                  ", embeddings have " + std::to_string(*dim));
      }
    });
  }
  if (o.events_file) {
    check(*o.events_file, [&] {
      std::size_t n = 0;
      read_events_json(*o.events_file, n);
      if (frame_count && n != *frame_count) {
        throw Error(Errc::kCountMismatch, "covers " + std::to_string(n) + " frames, found " +
                                              std::to_string(*frame_count));
      }
    });
  }
  report << "checked " << checked << " file(s), " << problems << " problem(s)\n";
  return problems;
}

int run(const std::vector<std::string>& args) {
  logger();
  PipelineOptions o;
  std::string theta = "adaptive";
  std::string grid = "13x13";
  double keep_percent = o.config.budget.keep_percent;
  std::uint64_t seed = 0;
  std::string frames_dir, video, saliency_dir, embeddings, query, events_file;
  bool validate = false;
  bool no_normalize = false;

  CLI::App app{"Motion-prior key content selection: event splitting, query-driven event selection and "
               "flow-based token pruning for video frames.",
               "flowgate"};
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();

  app.add_option("--frames", frames_dir, "Directory of numbered frame images (PNG or PNM)");
  app.add_option("--video", video, "Video file, decoded through --decoder");
  app.add_option("--decoder", o.decoder, "Decoder command; {input} and {output} are substituted");
  app.add_option("--flow", o.flow, "Flow provider: 'builtin' or a directory of flow_NNNNNN.flo files");
  app.add_option("--saliency", saliency_dir, "Directory of sal_NNNNNN.png maps (default: uniform)");
  app.add_option("--embeddings", embeddings, "Anchor or per-frame embeddings (EMB1 or JSON)");
  app.add_option("--query", query, "Query embedding, one record (EMB1 or JSON)");
  app.add_option("--events", events_file, "Reuse events.json instead of segmenting");
  app.add_option("--theta", theta, "HSV difference threshold, or 'adaptive' (mean + 2 sd)");
  app.add_option("--eta", o.config.des.eta, "Flow magnitude (px) confirming a boundary");
  app.add_option("--window", o.config.des.window, "Flow window M around each candidate (odd)");
  app.add_option("--min-event-len", o.config.des.min_event_len, "Closest spacing of two candidates, in frames");
  app.add_option("--keep-percent", keep_percent, "Percent k of moving patches kept per pruned frame");
  app.add_option("--p-target", o.config.budget.p_target, "Mass left unselected must not exceed this");
  app.add_option("--base-frames", o.config.budget.base_frames, "Frame budget before expansion");
  auto* tokens_opt = app.add_option("--tokens-per-frame", o.config.budget.tokens_per_frame, "Tokens per frame");
  auto* grid_opt = app.add_option("--grid", grid, "Patch grid WxH");
  app.add_option("--seed", seed, "Seed for RANSAC sampling");
  app.add_option("--workers", o.workers, "Worker threads (0: one per core)");
  app.add_flag("--overlays", o.overlays, "Write mask overlays next to plan.json");
  app.add_flag("--no-normalize", no_normalize, "Use raw embedding dot products");
  app.add_option("--name", o.name, "Video name recorded in outputs");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_flag("--validate-providers", validate, "Check provider files and exit");

  auto* seg = app.add_subcommand("segment", "Split frames into events (events.json, diff.csv)");
  auto* sel = app.add_subcommand("select", "Score events against a query (selection.json)");
  auto* plan = app.add_subcommand("plan", "Full pipeline (plan.json)");
  for (auto* sub : {seg, sel, plan}) sub->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<const char*> argv{"flowgate"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (!frames_dir.empty()) o.frames_dir = frames_dir;
    if (!video.empty()) o.video = video;
    if (!saliency_dir.empty()) o.saliency_dir = saliency_dir;
    if (!embeddings.empty()) o.embeddings = embeddings;
    if (!query.empty()) o.query = query;
    if (!events_file.empty()) o.events_file = events_file;
    o.normalize_embeddings = !no_normalize;
    if (theta != "adaptive") {
      std::size_t used = 0;
      try {
        o.config.des.theta = std::stod(theta, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != theta.size()) throw Error(Errc::kInvalidArgument, "--theta must be a number or 'adaptive'");
    }
    const auto x = grid.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(grid);
      std::size_t used_w = 0, used_h = 0;
      o.config.mtp.grid_w = std::stoi(grid.substr(0, x), &used_w);
      o.config.mtp.grid_h = std::stoi(grid.substr(x + 1), &used_h);
      if (used_w != x || used_h != grid.size() - x - 1) throw std::invalid_argument(grid);
    } catch (const std::exception&) {
      throw Error(Errc::kInvalidArgument, "--grid must look like 13x13");
    }
    if (grid_opt->count() > 0 && tokens_opt->count() == 0) {
      o.config.budget.tokens_per_frame = static_cast<std::size_t>(o.config.mtp.grid_w) * o.config.mtp.grid_h;
    }
    o.config.budget.keep_percent = keep_percent;
    o.config.mtp.keep_percent = keep_percent;
    o.config.mtp.ransac.seed = seed;
    if (o.workers == 0) o.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    o.validate();

    if (validate) {
      const std::size_t problems = validate_providers(o, std::cout);
      return problems == 0 ? kExitOk : kExitProvider;
    }
    if (seg->parsed()) {
      cmd_segment(o);
    } else if (sel->parsed()) {
      cmd_select(o);
    } else if (plan->parsed()) {
      cmd_plan(o);
    } else {
      std::cerr << app.help();
      return kExitValidation;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "flowgate: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "flowgate: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "flowgate: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace flowgate::cli
