#include "vbl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vbl/errors.hpp"

namespace vbl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file '" + path + "'");
  return out;
}

void write_meta(std::ofstream& out, const Metadata& meta) {
  out << "# tool_version=" << kToolVersion << "\n";
  for (const auto& [k, v] : meta) {
    out << "# " << k << "=" << v << "\n";
  }
}

}  // namespace

void write_profile_csv(const std::string& path, const WaveProfile& w, int samples,
                       const Metadata& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "z,U,V\n";
  const double lo = (w.kind == WaveKind::Pulse) ? w.z_left : 0.0;
  const double hi = (w.kind == WaveKind::Pulse) ? w.z_right : w.period;
  for (int i = 0; i < samples; ++i) {
    const double z = lo + (hi - lo) * i / (samples - 1);
    const auto [U, V] = w.eval(z);
    out << format_double(z) << "," << format_double(U) << "," << format_double(V) << "\n";
  }
}

void write_spectrum_csv(const std::string& path, const FloquetResult& fr, const Metadata& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "theta,re_lambda,im_lambda,abs_D\n";
  for (const SpectrumPoint& p : fr.points) {
    out << format_double(p.theta) << "," << format_double(p.lambda.real()) << ","
        << format_double(p.lambda.imag()) << "," << format_double(p.abs_D) << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ",";
    has_items_.back() = true;
    out_ += "\n";
    out_.append(2 * stack_.size(), ' ');
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += "{";
  stack_.push_back('{');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool had = has_items_.back();
  stack_.pop_back();
  has_items_.pop_back();
  if (had) {
    out_ += "\n";
    out_.append(2 * stack_.size(), ' ');
  }
  out_ += "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += "[";
  stack_.push_back('[');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool had = has_items_.back();
  stack_.pop_back();
  has_items_.pop_back();
  if (had) {
    out_ += "\n";
    out_.append(2 * stack_.size(), ' ');
  }
  out_ += "]";
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separate();
  out_ += "\"" + name + "\": ";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  if (std::isfinite(v)) {
    out_ += format_double(v);
  } else {
    out_ += "null";
  }
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  out_ += "\"";
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      default: out_ += c;
    }
  }
  out_ += "\"";
  return *this;
}

}  // namespace vbl
