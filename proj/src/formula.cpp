#include "iep/formula.hpp"
#include "iep/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace iep
{

namespace detail
{

struct node
{
    op kind;
    std::string name;
    const node* a = nullptr;
    const node* b = nullptr;
    std::uint32_t id = 0;
    int depth = 0;
    bool has_uni = false;
    bool has_temp = false;
};

namespace
{

using key = std::tuple< op, std::string, std::uint32_t, std::uint32_t >;

struct table
{
    std::mutex lock;
    std::map< key, std::unique_ptr< node > > nodes;
    std::uint32_t next_id = 1;
};

table& pool()
{
    static table t;
    return t;
}

const node* intern( op kind, const std::string& name, const node* a, const node* b )
{
    const bool uni = ( a && a->has_uni ) || ( b && b->has_uni ) || kind == op::dia;
    const bool temp = ( a && a->has_temp ) || ( b && b->has_temp ) || kind == op::dia_f || kind == op::dia_p;
    if ( uni && temp )
        throw input_error( "formula mixes unimodal and temporal operators" );

    auto& t = pool();
    std::lock_guard guard{ t.lock };
    key k{ kind, name, a ? a->id : 0, b ? b->id : 0 };
    auto it = t.nodes.find( k );
    if ( it != t.nodes.end() )
        return it->second.get();

    auto n = std::make_unique< node >();
    n->kind = kind;
    n->name = name;
    n->a = a;
    n->b = b;
    n->id = t.next_id++;
    n->has_uni = uni;
    n->has_temp = temp;
    int d = std::max( a ? a->depth : 0, b ? b->depth : 0 );
    if ( kind == op::dia || kind == op::dia_f || kind == op::dia_p )
        ++d;
    n->depth = d;
    const node* raw = n.get();
    t.nodes.emplace( std::move( k ), std::move( n ) );
    return raw;
}

} // namespace

} // namespace detail

op formula::kind() const { return _node->kind; }
const std::string& formula::name() const { return _node->name; }
formula formula::lhs() const { return formula{ _node->a }; }
formula formula::rhs() const { return formula{ _node->b }; }
std::uint32_t formula::id() const { return _node ? _node->id : 0; }
int formula::depth() const { return _node->depth; }
bool formula::is_temporal() const { return _node->has_temp; }
bool formula::is_unimodal_modal() const { return _node->has_uni; }

namespace
{

formula make( op kind, const std::string& name, formula a, formula b )
{
    return formula{ detail::intern( kind, name, a.raw(), b.raw() ) };
}

} // namespace

formula var( const std::string& name )
{
    if ( name.empty() )
        throw input_error( "empty variable name" );
    return make( op::var, name, {}, {} );
}
formula top() { return make( op::top, "", {}, {} ); }
formula bot() { return make( op::bot, "", {}, {} ); }
formula neg( formula a ) { return make( op::neg, "", a, {} ); }
formula conj( formula a, formula b ) { return make( op::conj, "", a, b ); }
formula dia( formula a ) { return make( op::dia, "", a, {} ); }
formula dia_f( formula a ) { return make( op::dia_f, "", a, {} ); }
formula dia_p( formula a ) { return make( op::dia_p, "", a, {} ); }

formula disj( formula a, formula b ) { return neg( conj( neg( a ), neg( b ) ) ); }
formula implies( formula a, formula b ) { return neg( conj( a, neg( b ) ) ); }
formula box( formula a ) { return neg( dia( neg( a ) ) ); }
formula box_f( formula a ) { return neg( dia_f( neg( a ) ) ); }
formula box_p( formula a ) { return neg( dia_p( neg( a ) ) ); }
formula dia_plus( formula a ) { return disj( a, dia( a ) ); }
formula box_plus( formula a ) { return conj( a, box( a ) ); }
formula dia_f_plus( formula a ) { return disj( a, dia_f( a ) ); }
formula dia_p_plus( formula a ) { return disj( a, dia_p( a ) ); }
formula box_f_plus( formula a ) { return conj( a, box_f( a ) ); }
formula box_p_plus( formula a ) { return conj( a, box_p( a ) ); }
formula univ_box( formula a ) { return conj( conj( a, box_f( a ) ), box_p( a ) ); }

formula conj_all( const std::vector< formula >& fs )
{
    if ( fs.empty() )
        return top();
    formula r = fs.front();
    for ( std::size_t i = 1; i < fs.size(); ++i )
        r = conj( r, fs[ i ] );
    return r;
}

// ---------------------------------------------------------------- parser

namespace
{

class parser
{
    std::string_view _s;
    std::size_t _pos = 0;

    void skip()
    {
        while ( _pos < _s.size() ) {
            char c = _s[ _pos ];
            if ( std::isspace( static_cast< unsigned char >( c ) ) )
                ++_pos;
            else if ( c == '#' ) {
                while ( _pos < _s.size() && _s[ _pos ] != '\n' )
                    ++_pos;
            } else
                break;
        }
    }

    bool eat( std::string_view tok )
    {
        skip();
        if ( _s.substr( _pos, tok.size() ) == tok ) {
            _pos += tok.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail( const std::string& msg ) const { throw parse_error( msg, _pos ); }

    void expect( std::string_view tok )
    {
        if ( !eat( tok ) )
            fail( "expected '" + std::string( tok ) + "'" );
    }

    template < typename F >
    formula guarded( std::size_t at, F&& build )
    {
        try {
            return build();
        } catch ( const parse_error& ) {
            throw;
        } catch ( const input_error& e ) {
            throw parse_error( e.what(), at );
        }
    }

    formula implication()
    {
        std::size_t at = _pos;
        formula l = disjunction();
        if ( eat( "->" ) ) {
            formula r = implication();
            return guarded( at, [ & ] { return implies( l, r ); } );
        }
        return l;
    }

    formula disjunction()
    {
        std::size_t at = _pos;
        formula l = conjunction();
        while ( eat( "|" ) ) {
            formula r = conjunction();
            l = guarded( at, [ & ] { return disj( l, r ); } );
        }
        return l;
    }

    formula conjunction()
    {
        std::size_t at = _pos;
        formula l = unary();
        while ( true ) {
            skip();
            if ( _pos < _s.size() && _s[ _pos ] == '&' ) {
                ++_pos;
                formula r = unary();
                l = guarded( at, [ & ] { return conj( l, r ); } );
            } else
                break;
        }
        return l;
    }

    formula unary()
    {
        skip();
        std::size_t at = _pos;
        if ( eat( "~" ) ) {
            formula a = unary();
            return neg( a );
        }
        if ( eat( "(" ) ) {
            formula a = implication();
            expect( ")" );
            return a;
        }
        if ( _pos >= _s.size() )
            fail( "unexpected end of input" );
        char c = _s[ _pos ];
        if ( !( std::isalpha( static_cast< unsigned char >( c ) ) || c == '_' ) )
            fail( std::string( "unexpected character '" ) + c + "'" );
        std::size_t start = _pos;
        while ( _pos < _s.size() ) {
            char d = _s[ _pos ];
            if ( std::isalnum( static_cast< unsigned char >( d ) ) || d == '_' || d == '\'' )
                ++_pos;
            else
                break;
        }
        std::string word( _s.substr( start, _pos - start ) );
        if ( word == "T" )
            return top();
        if ( word == "F" )
            return bot();

        static const std::set< std::string > keywords = {
            "dia", "box", "diaF", "diaP", "boxF", "boxP", "univbox" };
        if ( !keywords.count( word ) )
            return var( word );

        bool plus = false;
        if ( word != "univbox" && _pos < _s.size() && _s[ _pos ] == '+' ) {
            plus = true;
            ++_pos;
        }
        expect( "(" );
        formula a = implication();
        expect( ")" );
        return guarded( at, [ & ] {
            if ( word == "dia" )
                return plus ? dia_plus( a ) : dia( a );
            if ( word == "box" )
                return plus ? box_plus( a ) : box( a );
            if ( word == "diaF" )
                return plus ? dia_f_plus( a ) : dia_f( a );
            if ( word == "diaP" )
                return plus ? dia_p_plus( a ) : dia_p( a );
            if ( word == "boxF" )
                return plus ? box_f_plus( a ) : box_f( a );
            if ( word == "boxP" )
                return plus ? box_p_plus( a ) : box_p( a );
            return univ_box( a );
        } );
    }

public:
    explicit parser( std::string_view s ) : _s{ s } {}

    formula run()
    {
        formula f = implication();
        skip();
        if ( _pos != _s.size() )
            fail( "trailing input" );
        return f;
    }
};

} // namespace

formula parse( std::string_view text ) { return parser{ text }.run(); }

formula parse_file( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw input_error( "cannot open formula file: " + path );
    std::stringstream ss;
    ss << in.rdbuf();
    return parse( ss.str() );
}

// ---------------------------------------------------------------- render

namespace
{

// Precedence: 1 implication, 2 disjunction, 3 conjunction, 4 unary.
struct printer
{
    std::string out;

    static bool is_neg( formula f ) { return f.kind() == op::neg; }

    void wrap( formula f, int need )
    {
        if ( prec( f ) < need ) {
            out += '(';
            emit( f );
            out += ')';
        } else
            emit( f );
    }

    static int prec( formula f )
    {
        switch ( f.kind() ) {
        case op::conj:
            if ( is_univ( f ) || is_box_plus( f ) )
                return 4;
            return 3;
        case op::neg: {
            formula g = f.lhs();
            if ( g.kind() == op::conj ) {
                if ( is_dia_plus( f ) )
                    return 4;
                if ( is_neg( g.lhs() ) && is_neg( g.rhs() ) )
                    return 2;
                if ( is_neg( g.rhs() ) )
                    return 1;
            }
            return 4;
        }
        default:
            return 4;
        }
    }

    static const char* modal_name( op k )
    {
        switch ( k ) {
        case op::dia: return "dia";
        case op::dia_f: return "diaF";
        default: return "diaP";
        }
    }

    static const char* box_name( op k )
    {
        switch ( k ) {
        case op::dia: return "box";
        case op::dia_f: return "boxF";
        default: return "boxP";
        }
    }

    // a | dia(a)  ==  ~(~a & ~dia(a))
    static bool is_dia_plus( formula f )
    {
        if ( f.kind() != op::neg || f.lhs().kind() != op::conj )
            return false;
        formula l = f.lhs().lhs(), r = f.lhs().rhs();
        if ( !is_neg( l ) || !is_neg( r ) )
            return false;
        formula m = r.lhs();
        return m.is_modal() && m.lhs() == l.lhs();
    }

    // a & box(a)  ==  a & ~dia(~a)
    static bool is_box_plus( formula f )
    {
        if ( f.kind() != op::conj )
            return false;
        formula a = f.lhs(), r = f.rhs();
        return is_neg( r ) && r.lhs().is_modal() && is_neg( r.lhs().lhs() ) && r.lhs().lhs().lhs() == a;
    }

    static bool is_box_of( formula f, op k, formula a )
    {
        return is_neg( f ) && f.lhs().kind() == k && is_neg( f.lhs().lhs() ) && f.lhs().lhs().lhs() == a;
    }

    static bool is_univ( formula f )
    {
        if ( f.kind() != op::conj || f.lhs().kind() != op::conj )
            return false;
        formula a = f.lhs().lhs();
        return is_box_of( f.lhs().rhs(), op::dia_f, a ) && is_box_of( f.rhs(), op::dia_p, a );
    }

    void emit( formula f )
    {
        switch ( f.kind() ) {
        case op::var: out += f.name(); return;
        case op::top: out += 'T'; return;
        case op::bot: out += 'F'; return;
        case op::dia:
        case op::dia_f:
        case op::dia_p:
            out += modal_name( f.kind() );
            out += '(';
            emit( f.lhs() );
            out += ')';
            return;
        case op::conj:
            if ( is_univ( f ) ) {
                out += "univbox(";
                emit( f.lhs().lhs() );
                out += ')';
                return;
            }
            if ( is_box_plus( f ) ) {
                out += box_name( f.rhs().lhs().kind() );
                out += "+(";
                emit( f.lhs() );
                out += ')';
                return;
            }
            wrap( f.lhs(), 3 );
            out += " & ";
            wrap( f.rhs(), 4 );
            return;
        case op::neg: {
            formula g = f.lhs();
            if ( is_dia_plus( f ) ) {
                out += modal_name( g.rhs().lhs().kind() );
                out += "+(";
                emit( g.lhs().lhs() );
                out += ')';
                return;
            }
            if ( g.kind() == op::conj && is_neg( g.lhs() ) && is_neg( g.rhs() ) ) {
                wrap( g.lhs().lhs(), 2 );
                out += " | ";
                wrap( g.rhs().lhs(), 3 );
                return;
            }
            if ( g.kind() == op::conj && is_neg( g.rhs() ) ) {
                wrap( g.lhs(), 2 );
                out += " -> ";
                wrap( g.rhs().lhs(), 1 );
                return;
            }
            if ( g.is_modal() && is_neg( g.lhs() ) ) {
                out += box_name( g.kind() );
                out += '(';
                emit( g.lhs().lhs() );
                out += ')';
                return;
            }
            out += '~';
            wrap( g, 4 );
            return;
        }
        }
    }
};

} // namespace

std::string render( formula f )
{
    printer p;
    p.emit( f );
    return p.out;
}

// ---------------------------------------------------------------- measures

signature signature_of( formula f )
{
    signature s;
    for ( formula g : subformulas( f ) )
        if ( g.kind() == op::var )
            s.insert( g.name() );
    return s;
}

signature sig_intersect( const signature& a, const signature& b )
{
    signature r;
    std::set_intersection( a.begin(), a.end(), b.begin(), b.end(), std::inserter( r, r.end() ) );
    return r;
}

signature sig_union( const signature& a, const signature& b )
{
    signature r = a;
    r.insert( b.begin(), b.end() );
    return r;
}

bool sig_subset( const signature& a, const signature& b )
{
    return std::includes( b.begin(), b.end(), a.begin(), a.end() );
}

std::vector< formula > subformulas( formula f )
{
    std::vector< formula > order;
    std::unordered_set< std::uint32_t > seen;
    std::vector< std::pair< formula, bool > > stack{ { f, false } };
    while ( !stack.empty() ) {
        auto [ g, expanded ] = stack.back();
        stack.pop_back();
        if ( seen.count( g.id() ) )
            continue;
        if ( expanded ) {
            seen.insert( g.id() );
            order.push_back( g );
            continue;
        }
        stack.push_back( { g, true } );
        if ( g.rhs() )
            stack.push_back( { g.rhs(), false } );
        if ( g.lhs() )
            stack.push_back( { g.lhs(), false } );
    }
    return order;
}

formula strip_double_neg( formula f )
{
    while ( f.kind() == op::neg && f.lhs().kind() == op::neg )
        f = f.lhs().lhs();
    return f;
}

std::set< formula > sub_closure( formula f )
{
    std::set< formula > r;
    for ( formula g : subformulas( f ) ) {
        r.insert( strip_double_neg( g ) );
        r.insert( strip_double_neg( neg( g ) ) );
    }
    return r;
}

std::size_t formula_size( formula f ) { return sub_closure( f ).size(); }

int modal_depth( formula f ) { return f.depth(); }

} // namespace iep
