// Copyright 2026 The mapface Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic colour face corpus as <out>/<label>/<nn>.ppm.

#include <iostream>

#include "CLI11.hpp"
#include "mapface/error.hpp"
#include "mapface/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic class-per-directory face corpus"};
  mapface::SyntheticSpec spec;
  std::string out;
  app.add_option("--out", out, "Output root")->required();
  app.add_option("--classes", spec.classes, "Number of classes");
  app.add_option("--images", spec.images_per_class, "Images per class");
  app.add_option("--width", spec.width, "Image width");
  app.add_option("--height", spec.height, "Image height");
  app.add_option("--seed", spec.seed, "Generator seed");
  app.add_option("--signal", spec.signal, "Class signal amplitude");
  app.add_option("--noise", spec.pixel_noise, "Per-pixel noise sigma");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    mapface::write_dataset(mapface::generate_faces(spec), out);
  } catch (const mapface::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mapface::exit_status(e.code());
  }
  return 0;
}
