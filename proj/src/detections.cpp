// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/detections.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

double to_number(const std::string& token, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw ParseError("detection line " + std::to_string(line_no) +
                     ": bad number '" + token + "'");
  }
  return v;
}

}  // namespace

std::vector<DetectionRecord> parse_detections(const std::string& text) {
  std::vector<DetectionRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 7) {
      throw ParseError("detection line " + std::to_string(line_no) +
                       ": expected 7 fields, got " + std::to_string(tok.size()));
    }
    DetectionRecord d;
    d.frame_id = tok[0];
    d.box.cx = to_number(tok[1], line_no);
    d.box.cy = to_number(tok[2], line_no);
    d.box.w = to_number(tok[3], line_no);
    d.box.h = to_number(tok[4], line_no);
    d.box.theta = to_number(tok[5], line_no);
    d.box.confidence = to_number(tok[6], line_no);
    try {
      d.box = canonicalize(d.box);
    } catch (const InvalidBoxError& e) {
      throw ParseError("detection line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string write_detections(const std::vector<DetectionRecord>& dets) {
  std::string out;
  char buf[256];
  for (const DetectionRecord& d : dets) {
    std::snprintf(buf, sizeof(buf), "%s %.6f %.6f %.6f %.6f %.6f %.6f\n",
                  d.frame_id.c_str(), d.box.cx, d.box.cy, d.box.w, d.box.h,
                  d.box.theta, d.box.confidence);
    out += buf;
  }
  return out;
}

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open detections file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_detections(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_detections(const std::vector<DetectionRecord>& dets,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write detections file: " + path.string());
  out << write_detections(dets);
}

}  // namespace bevkit
