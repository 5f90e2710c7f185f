#ifndef VBL_IO_HPP
#define VBL_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "vbl/spectrum.hpp"
#include "vbl/waves.hpp"

namespace vbl {

inline constexpr const char* kToolVersion = "0.1.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

// 17-significant-digit decimal form, shared by every emitter so identical runs
// produce byte-identical files.
std::string format_double(double v);

// Columns z,U,V at a uniform resolution through the dense output; metadata as
// leading '# key=value' lines.
void write_profile_csv(const std::string& path, const WaveProfile& w, int samples,
                       const Metadata& meta);

// Columns theta,re_lambda,im_lambda,abs_D in the deterministic sort order.
void write_spectrum_csv(const std::string& path, const FloquetResult& fr, const Metadata& meta);

void write_text_file(const std::string& path, const std::string& content);

// Hand-rolled JSON emitter: insertion-ordered keys and %.17g doubles, so
// identical runs produce byte-identical reports.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& kv(const std::string& name, double v) { return key(name).value(v); }
  JsonWriter& kv(const std::string& name, int v) { return key(name).value(v); }
  JsonWriter& kv(const std::string& name, bool v) { return key(name).value(v); }
  JsonWriter& kv(const std::string& name, const std::string& v) { return key(name).value(v); }
  JsonWriter& kv(const std::string& name, const char* v) { return key(name).value(v); }
  std::string str() const { return out_; }

private:
  void separate();
  std::string out_;
  std::vector<char> stack_;       // '{' or '['
  std::vector<bool> has_items_;
  bool pending_key_ = false;
};

}  // namespace vbl

#endif
