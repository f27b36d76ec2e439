#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace raplab::cli {

using json = nlohmann::json;

/// A config value plus its key path ("input.rhs", "expect[2].path"), so
/// every error names the offending key.
class Node {
 public:
  Node(const json& v, std::string path) : v_(&v), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *v_; }

  bool has(std::string_view key) const;
  Node at(std::string_view key) const;
  std::optional<Node> find(std::string_view key) const;
  Node at(std::size_t i) const;
  std::size_t size() const;

  bool is_object() const { return v_->is_object(); }
  bool is_array() const { return v_->is_array(); }
  bool is_string() const { return v_->is_string(); }

  /// Numbers may also be written as constant expressions: "2*pi", "sqrt(2)".
  double number() const;
  long integer() const;
  std::size_t count() const;
  bool boolean() const;
  std::string string() const;
  std::vector<double> numbers() const;
  std::vector<std::string> strings() const;

  double number(std::string_view key, double fallback) const;
  long integer(std::string_view key, long fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::string string(std::string_view key, std::string fallback) const;

  /// Rejects keys outside the list (catches typos in optional keys).
  void allow(std::initializer_list<std::string_view> keys) const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const json* v_;
  std::string path_;
};

}  // namespace raplab::cli
