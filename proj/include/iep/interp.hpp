#pragma once

#include "iep/formula.hpp"
#include "iep/qmodel.hpp"
#include "iep/semantics.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace iep
{

struct bounds
{
    long long cL = 0;
    long long kb = 0;
    long long pL = 0;
    long long N_max = 0;
    long long sum_max = 0;
    long long size_max = 0;
};

// Closed forms from cL and n = max(|f1|, |f2|); throws on overflow.
bounds bounds_from( long long cL, long long n );
bounds compute_bounds( const logic& L, formula f1, formula f2 );

enum class match_type { a, b, c };

const char* match_type_name( match_type t );
match_type match_type_from_name( const std::string& s );

struct match_result
{
    std::optional< match_type > type;
    std::vector< std::string > reasons;
};

// Tries the types in the order a, b, c and reports why each one failed.
match_result is_sigma_matching( const std::vector< simple_model >& n1, const std::vector< simple_model >& n2,
                                const signature& sigma );

// Component ranges [begin, end) of one aligned segment pair.
struct segment
{
    match_type type = match_type::a;
    int left_begin = 0, left_end = 0;
    int right_begin = 0, right_end = 0;
};

struct witness_pair
{
    quasi_model m1, m2;
    std::vector< segment > segments;
};

bool certify_bisimilar( const witness_pair& w, const signature& sigma );

struct check_report
{
    bool ok = true;
    std::string failed;
    std::vector< std::string > transcript;

    void record( const std::string& name, bool pass, const std::string& detail = {} );
};

check_report verify_witness( const witness_pair& w, formula f1, formula f2, const logic& L, const bounds& bd );

enum class validity_status { valid, countermodel, unknown };

struct validity_result
{
    validity_status status = validity_status::unknown;
    std::optional< quasi_model > countermodel;
    std::string note;
};

// Searches rooted models on frames for L for a root refuting g.
validity_result decide_validity( formula g, const logic& L, long long max_states = 400000 );

struct search_limits
{
    int max_size = 24;
    int max_k = 3;
    int max_chain = 3;
    int max_prefix = 2;
    int max_segments = 4;
    long long budget = 200000;
};

enum class search_status { found, exhausted, budget_exceeded };

struct search_result
{
    search_status status = search_status::exhausted;
    std::optional< witness_pair > witness;
    long long expanded = 0;
};

search_result search_witness( formula f1, formula f2, const logic& L, const bounds& bd, const search_limits& lim );

struct enumerate_limits
{
    int max_depth = 4;
    int max_size = 5;
    int threads = 1;
    long long validity_states = 400000;
};

// First sigma-formula in canonical order that interpolates, if any.
std::optional< formula > enumerate_interpolant( formula f1, formula f2, const logic& L, const enumerate_limits& lim );

// The candidates in the order enumerate_interpolant tries them.
std::vector< formula > sigma_formulas( const signature& sigma, bool temporal, int max_size, int max_depth );

enum class verdict_kind { no_interpolant, interpolant_exists, unknown, implication_invalid };

const char* verdict_name( verdict_kind v );

struct iep_verdict
{
    verdict_kind kind = verdict_kind::unknown;
    std::optional< witness_pair > witness;
    std::optional< formula > interpolant;
    std::optional< quasi_model > countermodel;
    // Set when existence follows from exhausting a complete search.
    bool complete_search = false;
    std::vector< std::string > transcript;
};

enum class search_mode { sound, complete };

struct iep_options
{
    search_mode mode = search_mode::sound;
    search_limits search;
    enumerate_limits enumerate;
};

iep_verdict decide_iep( formula f1, formula f2, const logic& L, const iep_options& opt );

} // namespace iep
