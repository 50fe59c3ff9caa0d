#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alp/errors.hpp"

namespace alp {

/// Formats a double with 17 significant digits so that parsing the text
/// recovers the exact bit pattern. Used for every number we persist.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return std::string(buf);
}

inline std::string format_number(int v) { return std::to_string(v); }
inline std::string format_number(std::int64_t v) { return std::to_string(v); }

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Minimal JSON text builder. We hand-roll the writer so that every float
/// is serialized through format_number; files stay plain JSON and are read
/// back with an off-the-shelf parser.
class JsonWriter {
 public:
  JsonWriter& begin_object() { sep(); out_ += '{'; stack_.push_back('o'); first_ = true; return *this; }
  JsonWriter& end_object() { out_ += '}'; stack_.pop_back(); first_ = false; return *this; }
  JsonWriter& begin_array() { sep(); out_ += '['; stack_.push_back('a'); first_ = true; return *this; }
  JsonWriter& end_array() { out_ += ']'; stack_.pop_back(); first_ = false; return *this; }

  JsonWriter& key(const std::string& k) {
    sep();
    out_ += '"';
    escape(k);
    out_ += "\":";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) { sep(); out_ += format_number(v); return *this; }
  JsonWriter& value(int v) { sep(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(std::int64_t v) { sep(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(std::size_t v) { sep(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(bool v) { sep(); out_ += v ? "true" : "false"; return *this; }
  JsonWriter& value(const std::string& v) {
    sep();
    out_ += '"';
    escape(v);
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }

  JsonWriter& value(const Eigen::VectorXd& v) {
    begin_array();
    for (Eigen::Index i = 0; i < v.size(); ++i) value(v[i]);
    return end_array();
  }

  JsonWriter& value(const Eigen::VectorXi& v) {
    begin_array();
    for (Eigen::Index i = 0; i < v.size(); ++i) value(v[i]);
    return end_array();
  }

  /// Row-major flattening of a matrix.
  JsonWriter& value(const Eigen::MatrixXd& m) {
    begin_array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) value(m(r, c));
    return end_array();
  }

  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_ && !stack_.empty()) out_ += ',';
    first_ = false;
  }

  void escape(const std::string& s) {
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
  }

  std::string out_;
  std::vector<char> stack_;
  bool first_ = true;
  bool pending_value_ = false;
};

/// FNV-1a over a string; used as the content hash for generation configs.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace alp
