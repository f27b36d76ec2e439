#include "config.hpp"

#include <algorithm>
#include <cmath>

#include "raplab/error.hpp"
#include "raplab/expr.hpp"

namespace raplab::cli {

namespace {

std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

}  // namespace

void Node::fail(const std::string& what) const {
  throw Error(ErrorCode::ConfigError, "config key '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
}

bool Node::has(std::string_view key) const { return v_->is_object() && v_->contains(key); }

Node Node::at(std::string_view key) const {
  if (!v_->is_object()) fail("expected an object");
  const auto it = v_->find(key);
  if (it == v_->end()) Node(*v_, child(path_, key)).fail("missing required key");
  return Node(*it, child(path_, key));
}

std::optional<Node> Node::find(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return at(key);
}

Node Node::at(std::size_t i) const {
  if (!v_->is_array()) fail("expected an array");
  if (i >= v_->size()) fail("index " + std::to_string(i) + " out of range");
  return Node((*v_)[i], path_ + "[" + std::to_string(i) + "]");
}

std::size_t Node::size() const {
  if (!v_->is_array()) fail("expected an array");
  return v_->size();
}

double Node::number() const {
  double x = 0.0;
  if (v_->is_number()) {
    x = v_->get<double>();
  } else if (v_->is_string()) {
    try {
      x = Expr::compile(v_->get<std::string>(), {}).eval(nullptr);
    } catch (const Error& e) {
      fail(std::string("not a constant expression (") + e.what() + ")");
    }
  } else {
    fail("expected a number");
  }
  if (!std::isfinite(x)) fail("expected a finite number");
  return x;
}

long Node::integer() const {
  const double x = number();
  if (x != std::floor(x) || std::abs(x) > 9e15) fail("expected an integer");
  return static_cast<long>(x);
}

std::size_t Node::count() const {
  const long n = integer();
  if (n < 0) fail("expected a non-negative integer");
  return static_cast<std::size_t>(n);
}

bool Node::boolean() const {
  if (!v_->is_boolean()) fail("expected true or false");
  return v_->get<bool>();
}

std::string Node::string() const {
  if (!v_->is_string()) fail("expected a string");
  return v_->get<std::string>();
}

std::vector<double> Node::numbers() const {
  if (!v_->is_array()) {
    return {number()};
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
  return out;
}

std::vector<std::string> Node::strings() const {
  if (v_->is_string()) return {string()};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).string());
  return out;
}

double Node::number(std::string_view key, double fallback) const { return has(key) ? at(key).number() : fallback; }
long Node::integer(std::string_view key, long fallback) const { return has(key) ? at(key).integer() : fallback; }
bool Node::boolean(std::string_view key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }
std::string Node::string(std::string_view key, std::string fallback) const {
  return has(key) ? at(key).string() : std::move(fallback);
}

void Node::allow(std::initializer_list<std::string_view> keys) const {
  if (!v_->is_object()) fail("expected an object");
  for (const auto& [k, v] : v_->items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) Node(v, child(path_, k)).fail("unknown key");
  }
}

}  // namespace raplab::cli
