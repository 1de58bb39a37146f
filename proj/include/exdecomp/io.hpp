#ifndef EXDECOMP_IO_HPP_
#define EXDECOMP_IO_HPP_

#include <string>

#include "exdecomp/assembly.hpp"
#include "json.hpp"

namespace exdecomp {

using Json = nlohmann::json;

Json to_json(const Report& r);
Report report_from_json(const Json& j);

Json to_json(const Params& p);
Params params_from_json(const Json& j);
// Overrides only the fields present in `j`.
void apply_params(Params& p, const Json& j);

// {n, edges, partition{K, m, eps0, A0, B0, A, B}, G0, params, meta}.
Json to_json(const Instance& inst);
// Throws InputError on a missing or malformed field.
Instance instance_from_json(const Json& j);

Json to_json(const Certificate& c);
// Systems are rebuilt on n vertices. Throws InputError when malformed.
Certificate certificate_from_json(const Json& j, int n);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace exdecomp

#endif  // EXDECOMP_IO_HPP_
