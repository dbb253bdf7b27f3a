/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The aifrecon Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// aifrecon command-line tool. Talks to the library exclusively through the C
// API in aifrecon/aifrecon.h.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aifrecon/aifrecon.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct VolumeDeleter {
  void operator()(aif_volume* v) const { aif_volume_free(v); }
};
struct VectorVolumeDeleter {
  void operator()(aif_vector_volume* v) const { aif_vector_volume_free(v); }
};
struct BundleDeleter {
  void operator()(aif_bundle* b) const { aif_bundle_free(b); }
};
using VolumePtr = std::unique_ptr<aif_volume, VolumeDeleter>;
using VectorVolumePtr = std::unique_ptr<aif_vector_volume, VectorVolumeDeleter>;
using BundlePtr = std::unique_ptr<aif_bundle, BundleDeleter>;

// Carries a failed library call out of a subcommand.
struct Failure {
  aif_status status;
};

void check(aif_status s, const std::string& context) {
  if (s == AIF_OK) return;
  std::cerr << "error: " << context << ": " << aif_last_error() << "\n";
  throw Failure{s};
}

int exit_code_for(aif_status s) { return s == AIF_ERR_IO ? kExitIo : kExitValidation; }

VolumePtr load_volume(const std::string& path) {
  aif_volume* v = nullptr;
  check(aif_volume_load(path.c_str(), &v), "loading " + path);
  return VolumePtr(v);
}

VectorVolumePtr load_vector_volume(const std::string& path) {
  aif_vector_volume* v = nullptr;
  check(aif_vector_volume_load(path.c_str(), &v), "loading " + path);
  return VectorVolumePtr(v);
}

struct PrepMapsArgs {
  std::string label, out_prob, out_dir;
  double sigma = 10.0;
};

void run_prep_maps(const PrepMapsArgs& a) {
  const VolumePtr label = load_volume(a.label);
  aif_volume* prob = nullptr;
  check(aif_make_probability_map(label.get(), a.sigma, &prob), "building probability map");
  const VolumePtr prob_ptr(prob);
  aif_vector_volume* dir = nullptr;
  check(aif_make_gradient_map(prob, &dir), "building gradient map");
  const VectorVolumePtr dir_ptr(dir);
  check(aif_volume_save(prob, a.out_prob.c_str(), AIF_ELEM_F32), "writing " + a.out_prob);
  check(aif_vector_volume_save(dir, a.out_dir.c_str()), "writing " + a.out_dir);
}

struct SimulateArgs {
  std::string spec, phantom, out;
  std::uint64_t seed = 0;
};

void run_simulate(const SimulateArgs& a) {
  const VolumePtr phantom = load_volume(a.phantom);
  aif_bundle* b = nullptr;
  check(aif_simulate(a.spec.c_str(), phantom.get(), a.seed, &b), "simulating sweep");
  const BundlePtr bundle(b);
  check(aif_bundle_save(b, a.out.c_str()), "writing bundle " + a.out);
}

struct ReconstructArgs {
  std::string bundle, prob, dir, out, out_visited;
  std::string method = "aif";
  bool compensate = false;
  aif_recon_config cfg{};
};

void run_reconstruct(ReconstructArgs a) {
  a.cfg.method = a.method == "baseline" ? AIF_METHOD_BASELINE : AIF_METHOD_AIF;
  a.cfg.compensate = a.compensate ? 1 : 0;
  aif_bundle* b = nullptr;
  check(aif_bundle_load(a.bundle.c_str(), &b), "loading bundle " + a.bundle);
  const BundlePtr bundle(b);
  const VolumePtr prob = load_volume(a.prob);
  const VectorVolumePtr dir = load_vector_volume(a.dir);

  aif_volume* vol = nullptr;
  aif_volume* visited = nullptr;
  check(aif_reconstruct(b, prob.get(), dir.get(), &a.cfg, &vol, a.out_visited.empty() ? nullptr : &visited),
        "reconstructing");
  const VolumePtr vol_ptr(vol);
  const VolumePtr visited_ptr(visited);
  check(aif_volume_save(vol, a.out.c_str(), AIF_ELEM_F32), "writing " + a.out);
  if (visited) check(aif_volume_save(visited, a.out_visited.c_str(), AIF_ELEM_U8), "writing " + a.out_visited);
}

struct MetricsArgs {
  std::string mask, visited, threshold = "otsu", otsu_reference;
  std::vector<std::string> volumes;  // name=path
};

void run_metrics(const MetricsArgs& a) {
  const VolumePtr mask = load_volume(a.mask);
  VolumePtr visited;
  if (!a.visited.empty()) visited = load_volume(a.visited);

  std::vector<std::pair<std::string, VolumePtr>> vols;
  for (const std::string& spec : a.volumes) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    if (name.empty() || path.empty()) {
      std::cerr << "error: volume argument '" << spec << "' must be name=path\n";
      throw Failure{AIF_ERR_INVALID_ARGUMENT};
    }
    vols.emplace_back(name, load_volume(path));
  }

  double threshold = 0.0;
  if (a.threshold == "otsu") {
    const aif_volume* ref = vols.front().second.get();
    if (!a.otsu_reference.empty()) {
      ref = nullptr;
      for (const auto& [name, v] : vols)
        if (name == a.otsu_reference) ref = v.get();
      if (ref == nullptr) {
        std::cerr << "error: --otsu-reference '" << a.otsu_reference << "' is not among the volumes\n";
        throw Failure{AIF_ERR_INVALID_ARGUMENT};
      }
    }
    check(aif_otsu_threshold(ref, visited.get(), &threshold), "computing Otsu threshold");
  } else {
    try {
      std::size_t used = 0;
      threshold = std::stod(a.threshold, &used);
      if (used != a.threshold.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      std::cerr << "error: --threshold must be 'otsu' or a number, got '" << a.threshold << "'\n";
      throw Failure{AIF_ERR_INVALID_ARGUMENT};
    }
  }

  std::printf("threshold %.4f\n", threshold);
  std::printf("%-20s %12s %12s %12s %12s %12s\n", "name", "surface_mean", "bg_mean", "contrast", "cnr",
              "completeness");
  for (const auto& [name, v] : vols) {
    aif_metrics_report r{};
    check(aif_metrics(v.get(), mask.get(), visited.get(), threshold, &r), "metrics for " + name);
    std::printf("%-20s %12.4f %12.4f %12.4f %12.4f %12.4f\n", name.c_str(), r.surface_mean,
                r.background_mean, r.contrast_ratio, r.cnr, r.completeness);
  }
}

struct ExportSliceArgs {
  std::string vol, axis = "z", out;
  int index = 0;
};

void run_export_slice(const ExportSliceArgs& a) {
  const VolumePtr vol = load_volume(a.vol);
  const aif_axis axis = a.axis == "x" ? AIF_AXIS_X : a.axis == "y" ? AIF_AXIS_Y : AIF_AXIS_Z;
  check(aif_export_slice(vol.get(), axis, a.index, a.out.c_str()), "exporting slice");
}

struct MakePhantomArgs {
  std::string shape = "twin-ridge", out, out_mask;
  std::vector<int> dims{64, 64, 64};
  std::vector<double> spacing{1.0, 1.0, 1.0};
  std::vector<double> origin{0.0, 0.0, 0.0};
  std::vector<double> center{32.0, 32.0, 32.0};
  std::vector<double> normal{0.0, 1.0, 0.0};
  double radius = 8.0, separation = 24.0, length = 0.0, offset = 32.0;
};

void run_make_phantom(const MakePhantomArgs& a) {
  aif_volume_meta meta{};
  for (int k = 0; k < 3; ++k) {
    meta.dims[k] = a.dims[k];
    meta.spacing[k] = a.spacing[k];
    meta.origin[k] = a.origin[k];
  }
  aif_volume* label = nullptr;
  if (a.shape == "sphere")
    check(aif_make_phantom_sphere(&meta, a.center.data(), a.radius, &label), "building sphere");
  else if (a.shape == "half-space")
    check(aif_make_phantom_half_space(&meta, a.normal.data(), a.offset, &label), "building half-space");
  else
    check(aif_make_phantom_twin_ridge(&meta, a.center.data(), a.radius, a.separation, a.length, &label),
          "building twin ridge");
  const VolumePtr label_ptr(label);
  check(aif_volume_save(label, a.out.c_str(), AIF_ELEM_U8), "writing " + a.out);
  if (!a.out_mask.empty()) {
    aif_volume* mask = nullptr;
    check(aif_surface_mask_from_label(label, &mask), "building surface mask");
    const VolumePtr mask_ptr(mask);
    check(aif_volume_save(mask, a.out_mask.c_str(), AIF_ELEM_U8), "writing " + a.out_mask);
  }
}

}  // namespace

int main(int argc, char** argv) {
  aif_recon_config defaults{};
  aif_recon_config_default(&defaults);

  CLI::App app{"Angle-weighted 3D ultrasound volume reconstruction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aif_version()));

  PrepMapsArgs prep;
  auto* prep_cmd = app.add_subcommand("prep-maps", "Bone probability and surface gradient maps from a label volume");
  prep_cmd->add_option("--label", prep.label, "Binary label volume")->required();
  prep_cmd->add_option("--sigma", prep.sigma, "Gaussian sigma in voxels")->capture_default_str();
  prep_cmd->add_option("--out-prob", prep.out_prob, "Output probability volume (f32)")->required();
  prep_cmd->add_option("--out-dir", prep.out_dir, "Output gradient volume (vec3f32)")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Render a tracked multi-angle sweep over a phantom");
  sim_cmd->add_option("--spec", sim.spec, "Sweep config (JSON)")->required();
  sim_cmd->add_option("--phantom", sim.phantom, "Binary label volume")->required();
  sim_cmd->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output bundle directory")->required();

  ReconstructArgs rec;
  rec.cfg = defaults;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct a volume from a frame bundle");
  rec_cmd->add_option("--bundle", rec.bundle, "Frame bundle directory")->required();
  rec_cmd->add_option("--prob", rec.prob, "Bone probability volume; defines the output grid")->required();
  rec_cmd->add_option("--dir", rec.dir, "Surface gradient volume")->required();
  rec_cmd->add_option("--method", rec.method, "baseline or aif")
      ->check(CLI::IsMember({"baseline", "aif"}))
      ->capture_default_str();
  rec_cmd->add_flag("--compensate", rec.compensate, "Enable reflection energy compensation");
  rec_cmd->add_option("--alpha", rec.cfg.alpha, "Bone enhancement factor")->capture_default_str();
  rec_cmd->add_option("--beta", rec.cfg.beta, "Cosine threshold for compensation")->capture_default_str();
  rec_cmd->add_option("--hole-fill-radius", rec.cfg.hole_fill_radius, "Hole filling limit in voxels")
      ->capture_default_str();
  rec_cmd->add_option("--out", rec.out, "Output volume (f32)")->required();
  rec_cmd->add_option("--out-visited", rec.out_visited, "Optional 0/1 volume of distributed voxels (u8)");

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "Surface contrast and completeness of reconstructions");
  met_cmd->add_option("--mask", met.mask, "Surface mask volume (nonzero = surface)")->required();
  met_cmd->add_option("--threshold", met.threshold, "'otsu' or an intensity in (0, 255)")->capture_default_str();
  met_cmd->add_option("--otsu-reference", met.otsu_reference,
                      "Volume name the Otsu threshold is computed on (default: first listed)");
  met_cmd->add_option("--visited", met.visited, "Restrict statistics to these voxels (0/1 volume)");
  met_cmd->add_option("volumes", met.volumes, "Volumes as name=path")->required();

  ExportSliceArgs exp;
  auto* exp_cmd = app.add_subcommand("export-slice", "Write one cross-section as an 8-bit PGM");
  exp_cmd->add_option("--vol", exp.vol, "Volume to slice")->required();
  exp_cmd->add_option("--axis", exp.axis, "x, y or z")->check(CLI::IsMember({"x", "y", "z"}))->capture_default_str();
  exp_cmd->add_option("--index", exp.index, "Slice index")->required();
  exp_cmd->add_option("--out", exp.out, "Output PGM")->required();

  MakePhantomArgs ph;
  auto* ph_cmd = app.add_subcommand("make-phantom", "Write a binary phantom label volume");
  ph_cmd->add_option("--shape", ph.shape, "sphere, half-space or twin-ridge")
      ->check(CLI::IsMember({"sphere", "half-space", "twin-ridge"}))
      ->capture_default_str();
  ph_cmd->add_option("--dims", ph.dims, "Voxels per axis")->expected(3)->capture_default_str();
  ph_cmd->add_option("--spacing", ph.spacing, "mm per voxel")->expected(3)->capture_default_str();
  ph_cmd->add_option("--origin", ph.origin, "World position of voxel (0,0,0)")->expected(3)->capture_default_str();
  ph_cmd->add_option("--center", ph.center, "Sphere or ridge-pair center (mm)")->expected(3)->capture_default_str();
  ph_cmd->add_option("--radius", ph.radius, "Sphere or ridge radius (mm)")->capture_default_str();
  ph_cmd->add_option("--separation", ph.separation, "Ridge center distance along X (mm)")->capture_default_str();
  ph_cmd->add_option("--length", ph.length, "Ridge extent along Z (mm), 0 = unbounded")->capture_default_str();
  ph_cmd->add_option("--normal", ph.normal, "Half-space normal into the solid")->expected(3)->capture_default_str();
  ph_cmd->add_option("--offset", ph.offset, "Half-space offset (normal . p >= offset)")->capture_default_str();
  ph_cmd->add_option("--out", ph.out, "Output label volume (u8)")->required();
  ph_cmd->add_option("--out-mask", ph.out_mask, "Optional surface mask volume (u8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*prep_cmd) run_prep_maps(prep);
    else if (*sim_cmd) run_simulate(sim);
    else if (*rec_cmd) run_reconstruct(rec);
    else if (*met_cmd) run_metrics(met);
    else if (*exp_cmd) run_export_slice(exp);
    else if (*ph_cmd) run_make_phantom(ph);
  } catch (const Failure& f) {
    return exit_code_for(f.status);
  }
  return kExitOk;
}
