#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace iep
{

enum class op : std::uint8_t { var, top, bot, neg, conj, dia, dia_f, dia_p };

namespace detail { struct node; }

// Hash-consed formula handle: structurally equal formulas share one node,
// so equality and ordering are by node identity.
class formula
{
    const detail::node* _node = nullptr;

public:
    formula() = default;
    explicit formula( const detail::node* n ) : _node{ n } {}
    [[nodiscard]] const detail::node* raw() const { return _node; }

    [[nodiscard]] op kind() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] formula lhs() const;
    [[nodiscard]] formula rhs() const;
    [[nodiscard]] std::uint32_t id() const;
    [[nodiscard]] int depth() const;
    [[nodiscard]] bool is_temporal() const;
    [[nodiscard]] bool is_unimodal_modal() const;
    [[nodiscard]] bool is_modal() const { return kind() == op::dia || kind() == op::dia_f || kind() == op::dia_p; }

    explicit operator bool() const { return _node != nullptr; }
    bool operator==( const formula& o ) const { return _node == o._node; }
    bool operator!=( const formula& o ) const { return _node != o._node; }
    bool operator<( const formula& o ) const { return id() < o.id(); }
};

using signature = std::set< std::string >;

// Primitive constructors.
formula var( const std::string& name );
formula top();
formula bot();
formula neg( formula a );
formula conj( formula a, formula b );
formula dia( formula a );
formula dia_f( formula a );
formula dia_p( formula a );

// Derived forms, desugared on construction.
formula disj( formula a, formula b );
formula implies( formula a, formula b );
formula box( formula a );
formula box_f( formula a );
formula box_p( formula a );
formula dia_plus( formula a );
formula box_plus( formula a );
formula dia_f_plus( formula a );
formula dia_p_plus( formula a );
formula box_f_plus( formula a );
formula box_p_plus( formula a );
formula univ_box( formula a );
formula conj_all( const std::vector< formula >& fs );

formula parse( std::string_view text );
formula parse_file( const std::string& path );
std::string render( formula f );

signature signature_of( formula f );
signature sig_intersect( const signature& a, const signature& b );
signature sig_union( const signature& a, const signature& b );
bool sig_subset( const signature& a, const signature& b );

// Distinct subformulas, children before parents; the last entry is f.
std::vector< formula > subformulas( formula f );
// Subformulas and their negations, with double negations collapsed.
std::set< formula > sub_closure( formula f );
std::size_t formula_size( formula f );
int modal_depth( formula f );
// Strips pairs of leading negations.
formula strip_double_neg( formula f );

} // namespace iep

template <>
struct std::hash< iep::formula >
{
    std::size_t operator()( const iep::formula& f ) const noexcept { return f.id(); }
};
